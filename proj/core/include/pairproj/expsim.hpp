#pragma once

#include <cstdint>
#include <vector>

#include "pairproj/hardy.hpp"
#include "pairproj/optics.hpp"
#include "pairproj/types.hpp"

namespace pairproj {
namespace expsim {

struct Range {
  double lo = 0.0;
  double hi = 1.0;

  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Phenomenological imperfection model. hom_visibility scales the
/// interference (off-diagonal) structure of the measurement operator;
/// vppbs_visibility is the interferometer visibility that limits the
/// achievable transmission ranges; dark_rate is the expected background
/// coincidence rate per second.
struct NoiseModel {
  double hom_visibility = 1.0;
  double vppbs_visibility = 1.0;
  Range t_h_range{0.0, 1.0};  // achievable transmission probability T_H
  Range t_v_range{0.0, 1.0};  // achievable transmission probability T_V
  double dark_rate = 0.0;

  void validate() const;
};

/// The nominal model of the demonstration hardware: 90% two-photon
/// interference visibility, 93% interferometer visibility,
/// T_H in [0.03, 0.95], T_V in [0.02, 0.84], and a 0.05/s accidental
/// background (about 1% of the peak coincidence rate).
NoiseModel nominal_noise_model();

/// Ideal (no-op) noise model.
NoiseModel ideal_noise_model();

/// Measurement operator with imperfect two-photon interference: the
/// off-diagonal elements of the ideal operator are scaled by hom_visibility,
/// diagonal elements are unchanged. Throws Error(range) when the settings'
/// transmission probabilities fall outside the achievable ranges.
PolarizationOperator noisy_povm(const optics::VppbsSettings& settings,
                                const NoiseModel& noise);

/// Expected coincidence counts for a probe state over `duration` seconds:
/// rate_scale * <phi|Pi_noisy|phi> + dark_rate * duration.
double expected_counts(const PolarizationOperator& noisy_op,
                       const TwoPhotonState& state, const NoiseModel& noise,
                       double rate_scale, double duration);

struct DelayScan {
  std::vector<double> delays;  // in units of the photon coherence length
  double overlap_sigma = 1.0;
  std::vector<double> probabilities;
  double indistinguishable_value = 0.0;  // full-interference limit
  double distinguishable_value = 0.0;    // plateau (labeled-photon limit)
};

struct DelayScanRequest {
  double tau_min = -5.0;
  double tau_max = 5.0;
  int points = 101;
  double overlap_sigma = 1.0;
};

/// Coincidence probability versus photon delay. Interference terms are
/// weighted by v(tau) = hom_visibility * exp(-tau^2 / (2 sigma^2)):
///   P(tau) = P_dist + v(tau) (P_ind - P_dist),
/// where both limits come from the Fock-space train (the distinguishable one
/// via an auxiliary temporal mode label).
DelayScan coincidence_vs_delay(const TwoPhotonState& input,
                               const optics::VppbsSettings& settings,
                               const DelayScanRequest& request,
                               const NoiseModel& noise);

/// End-to-end simulated Hardy run: noisy measurement operator at the best
/// achievable settings for `gamma`, the six analyzer pairs at the Hardy
/// angles, Poisson counts over `duration`. Deterministic per seed.
hardy::HardyCounts simulate_hardy_run(double gamma, const NoiseModel& noise,
                                      double rate_scale, double duration,
                                      std::uint64_t seed);

/// Best settings for `gamma` within the noise model's achievable transmission
/// ranges (equals optimal_settings when the ranges allow unit transmission).
/// Throws Error(range) when no achievable setting realizes gamma.
optics::VppbsSettings achievable_settings(double gamma,
                                          const NoiseModel& noise);

}  // namespace expsim
}  // namespace pairproj
