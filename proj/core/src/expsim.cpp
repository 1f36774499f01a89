#include "pairproj/expsim.hpp"

#include <cmath>

#include "pairproj/error.hpp"
#include "pairproj/fock.hpp"
#include "pairproj/jones.hpp"
#include "pairproj/random.hpp"

namespace pairproj {
namespace expsim {

void NoiseModel::validate() const {
  if (!(hom_visibility >= 0.0 && hom_visibility <= 1.0)) {
    throw Error(ErrorKind::validation, "hom_visibility must lie in [0, 1]");
  }
  if (!(vppbs_visibility >= 0.0 && vppbs_visibility <= 1.0)) {
    throw Error(ErrorKind::validation, "vppbs_visibility must lie in [0, 1]");
  }
  if (!(t_h_range.lo >= 0.0 && t_h_range.hi <= 1.0 &&
        t_h_range.lo <= t_h_range.hi) ||
      !(t_v_range.lo >= 0.0 && t_v_range.hi <= 1.0 &&
        t_v_range.lo <= t_v_range.hi)) {
    throw Error(ErrorKind::validation,
                "transmission ranges must be non-empty subintervals of [0, 1]");
  }
  if (!(dark_rate >= 0.0)) {
    throw Error(ErrorKind::validation, "dark_rate must be >= 0");
  }
}

NoiseModel nominal_noise_model() {
  NoiseModel m;
  m.hom_visibility = 0.90;
  m.vppbs_visibility = 0.93;
  m.t_h_range = Range{0.03, 0.95};
  m.t_v_range = Range{0.02, 0.84};
  // Accidental coincidences at ~1% of the peak signal rate; the source
  // hardware's background is unreported but its reconstructed-concurrence
  // floor requires one.
  m.dark_rate = 0.05;
  return m;
}

NoiseModel ideal_noise_model() { return NoiseModel{}; }

namespace {

void check_ranges(const optics::VppbsSettings& settings,
                  const NoiseModel& noise) {
  double big_t_h = settings.t_h * settings.t_h;
  double big_t_v = settings.t_v * settings.t_v;
  const double slack = 1e-12;
  if (big_t_h < noise.t_h_range.lo - slack ||
      big_t_h > noise.t_h_range.hi + slack) {
    throw Error(ErrorKind::range,
                "T_H = " + std::to_string(big_t_h) +
                    " outside achievable range [" +
                    std::to_string(noise.t_h_range.lo) + ", " +
                    std::to_string(noise.t_h_range.hi) + "]");
  }
  if (big_t_v < noise.t_v_range.lo - slack ||
      big_t_v > noise.t_v_range.hi + slack) {
    throw Error(ErrorKind::range,
                "T_V = " + std::to_string(big_t_v) +
                    " outside achievable range [" +
                    std::to_string(noise.t_v_range.lo) + ", " +
                    std::to_string(noise.t_v_range.hi) + "]");
  }
}

}  // namespace

PolarizationOperator noisy_povm(const optics::VppbsSettings& settings,
                                const NoiseModel& noise) {
  noise.validate();
  check_ranges(settings, noise);
  Matrix4c ideal = optics::compose_projector(settings).op.matrix();
  Matrix4c out = ideal;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i != j) out(i, j) *= noise.hom_visibility;
    }
  }
  return PolarizationOperator(out);
}

double expected_counts(const PolarizationOperator& noisy_op,
                       const TwoPhotonState& state, const NoiseModel& noise,
                       double rate_scale, double duration) {
  // Expectations of a PSD operator can round to tiny negatives at true zeros.
  double probability = std::max(0.0, expectation(noisy_op, state));
  return rate_scale * probability + noise.dark_rate * duration;
}

DelayScan coincidence_vs_delay(const TwoPhotonState& input,
                               const optics::VppbsSettings& settings,
                               const DelayScanRequest& request,
                               const NoiseModel& noise) {
  noise.validate();
  if (!(request.overlap_sigma > 0.0)) {
    throw Error(ErrorKind::validation, "overlap_sigma must be > 0");
  }
  if (request.points < 2 || !(request.tau_max > request.tau_min)) {
    throw Error(ErrorKind::validation, "delay grid must contain >= 2 points");
  }

  // Both interference limits from the Fock-space train.
  fock::ModeMap train = fock::build_destructive_train(settings);
  fock::FockState evolved =
      fock::apply_mode_map(fock::inject_state(input), train);
  double p_ind = fock::post_select_coincidence(evolved).probability;
  double p_dist =
      fock::distinguishable_coincidence_probability(input, settings);

  DelayScan scan;
  scan.overlap_sigma = request.overlap_sigma;
  scan.indistinguishable_value = p_ind;
  scan.distinguishable_value = p_dist;
  scan.delays.reserve(request.points);
  scan.probabilities.reserve(request.points);
  double step = (request.tau_max - request.tau_min) / (request.points - 1);
  for (int i = 0; i < request.points; ++i) {
    double tau = request.tau_min + step * i;
    double s = tau / request.overlap_sigma;
    double v = noise.hom_visibility * std::exp(-0.5 * s * s);
    scan.delays.push_back(tau);
    scan.probabilities.push_back(p_dist + v * (p_ind - p_dist));
  }
  return scan;
}

optics::VppbsSettings achievable_settings(double gamma,
                                          const NoiseModel& noise) {
  if (!(gamma >= -1.0 && gamma <= 1.0)) {
    throw Error(ErrorKind::domain, "gamma must lie in [-1, 1]");
  }
  // Fix the transmission ratio from gamma, then take the largest achievable
  // pair to minimize loss.
  double big_t_h, big_t_v;
  if (gamma >= 0.0) {
    double ratio = (1.0 - gamma) / (1.0 + gamma);  // T_V / T_H
    big_t_h = std::min(noise.t_h_range.hi,
                       ratio > 0.0 ? noise.t_v_range.hi / ratio : 1.0);
    big_t_v = big_t_h * ratio;
  } else {
    double ratio = (1.0 + gamma) / (1.0 - gamma);  // T_H / T_V
    big_t_v = std::min(noise.t_v_range.hi,
                       ratio > 0.0 ? noise.t_h_range.hi / ratio : 1.0);
    big_t_h = big_t_v * ratio;
  }
  optics::VppbsSettings settings =
      optics::VppbsSettings::from_transmissions(big_t_h, big_t_v, 0.0);
  check_ranges(settings, noise);
  return settings;
}

hardy::HardyCounts simulate_hardy_run(double gamma, const NoiseModel& noise,
                                      double rate_scale, double duration,
                                      std::uint64_t seed) {
  optics::VppbsSettings settings = achievable_settings(gamma, noise);
  PolarizationOperator op = noisy_povm(settings, noise);
  hardy::HardyAngles angles = hardy::hardy_angles(gamma);

  hardy::HardyCounts out;
  out.duration = duration;
  Rng rng(seed);
  for (int i = 0; i < 6; ++i) {
    auto [theta1, theta2] = hardy::hardy_pair_angles(angles, i);
    TwoPhotonState probe =
        tensor_state(linear_polarization_state(theta1),
                     linear_polarization_state(theta2));
    double mean =
        expected_counts(op, probe, noise, rate_scale * duration, duration);
    out.counts[i] = static_cast<double>(rng.poisson(mean));
  }
  return out;
}

}  // namespace expsim
}  // namespace pairproj
