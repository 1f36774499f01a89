#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "pairproj/entanglement.hpp"
#include "pairproj/error.hpp"
#include "pairproj/random.hpp"
#include "pairproj/tomography.hpp"
#include "test_support.hpp"

using namespace pairproj;
using namespace pairproj::tomo;
namespace ts = test_support;

namespace {

std::vector<CountRecord> exact_records(const PolarizationOperator& op,
                                       const std::vector<Probe>& probes,
                                       double scale) {
  std::vector<CountRecord> records;
  for (const auto& probe : probes) {
    CountRecord rec;
    rec.label = probe.label;
    rec.counts = scale * expectation(op, probe.state);
    rec.duration = 1.0;
    rec.rate_scale = scale;
    records.push_back(rec);
  }
  return records;
}

PolarizationOperator eta_psi_tilde(double gamma) {
  optics::VppbsSettings s = optics::optimal_settings(gamma);
  return optics::compose_projector(s).op;
}

}  // namespace

TEST_CASE("probe set layout") {
  std::vector<Probe> probes = probe_states();
  REQUIRE(probes.size() == 16);
  CHECK(probes[0].label == "HH");
  CHECK(probes[1].label == "VH");
  CHECK(probes[2].label == "DH");
  CHECK(probes[3].label == "RH");
  CHECK(probes[4].label == "HV");

  // Labels unique.
  for (size_t i = 0; i < probes.size(); ++i) {
    for (size_t j = i + 1; j < probes.size(); ++j) {
      CHECK(probes[i].label != probes[j].label);
    }
  }

  // Entry HH is (1,0,0,0); entry DR is the tensor of D and R amplitudes.
  CHECK(std::abs(probes[0].state.amp(kHH) - Complex(1, 0)) < 1e-15);
  const Probe* dr = nullptr;
  for (const auto& p : probes) {
    if (p.label == "DR") dr = &p;
  }
  REQUIRE(dr != nullptr);
  CHECK(std::abs(dr->state.amp(kHH) - Complex(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(dr->state.amp(kHV) - Complex(0.0, 0.5)) < 1e-15);
  CHECK(std::abs(dr->state.amp(kVH) - Complex(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(dr->state.amp(kVV) - Complex(0.0, 0.5)) < 1e-15);
}

TEST_CASE("probe set is informationally complete (Gram rank 16)") {
  std::vector<Probe> probes = probe_states();
  Eigen::MatrixXd gram(16, 16);
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      Complex overlap =
          probes[i].state.amplitudes().dot(probes[j].state.amplitudes());
      gram(i, j) = std::norm(overlap);  // tr(P_i P_j)
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  CHECK(lu.rank() == 16);
}

TEST_CASE("predicted probabilities of named operators") {
  std::vector<Probe> probes = probe_states();
  std::vector<double> p =
      predicted_probabilities(optics::singlet_projector(), probes);
  CHECK(p[0] == doctest::Approx(0.0));  // HH
  CHECK(p[4] == doctest::Approx(0.5));  // HV

  // op = eta|psi~><psi~| at optimal gamma = 0.645: probe HV gives
  // eta (1+gamma)/2 = 1/2 exactly.
  std::vector<double> q =
      predicted_probabilities(eta_psi_tilde(0.645), probes);
  CHECK(q[4] == doctest::Approx(0.5).epsilon(1e-12));

  std::vector<double> ones = predicted_probabilities(
      PolarizationOperator(Matrix4c::Identity()), probes);
  for (double v : ones) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("simulate_counts basics") {
  std::vector<Probe> probes = probe_states();

  auto zeros = simulate_counts(PolarizationOperator(Matrix4c::Zero()), probes,
                               1000.0, 1.0, 7);
  for (const auto& rec : zeros) CHECK(rec.counts == 0.0);

  // Determinism.
  auto a = simulate_counts(eta_psi_tilde(0.3), probes, 500.0, 2.0, 42);
  auto b = simulate_counts(eta_psi_tilde(0.3), probes, 500.0, 2.0, 42);
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].counts == b[i].counts);
  auto c = simulate_counts(eta_psi_tilde(0.3), probes, 500.0, 2.0, 43);
  bool any_different = false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].counts != c[i].counts) any_different = true;
  }
  CHECK(any_different);
}

TEST_CASE("poisson sampler mean at 1e6 (law of large numbers)") {
  Rng rng(11);
  const double mean = 1e6;
  const int trials = 1000;
  double total = 0.0;
  for (int i = 0; i < trials; ++i) {
    total += static_cast<double>(rng.poisson(mean));
  }
  double sample_mean = total / trials;
  CHECK(std::abs(sample_mean - mean) / mean < 0.005);
}

TEST_CASE("poisson sampler variance sanity at moderate mean") {
  Rng rng(13);
  const double mean = 300.0;
  const int trials = 20000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < trials; ++i) {
    double x = static_cast<double>(rng.poisson(mean));
    sum += x;
    sumsq += x * x;
  }
  double m = sum / trials;
  double var = sumsq / trials - m * m;
  CHECK(std::abs(m - mean) < 0.05 * mean);
  CHECK(std::abs(var - mean) < 0.10 * mean);
}

TEST_CASE("noiseless reconstruction recovers the singlet projector") {
  std::vector<Probe> probes = probe_states();
  PolarizationOperator truth = optics::singlet_projector();
  ReconstructionOptions opts;
  opts.gradient_tol = 1e-12;
  ReconstructionResult rec =
      reconstruct(exact_records(truth, probes, 1e4), probes, opts);
  CHECK(rec.converged);
  CHECK(operator_fidelity(rec.op, truth) >= 1.0 - 1e-8);
}

TEST_CASE("noiseless reconstruction consistency over random operators") {
  std::vector<Probe> probes = probe_states();
  for (int i = 0; i < 100; ++i) {
    PolarizationOperator truth = ts::random_psd();
    ReconstructionResult rec =
        reconstruct(exact_records(truth, probes, 1e4), probes);
    CHECK(operator_fidelity(rec.op, truth) >= 1.0 - 1e-8);
    CHECK(ts::max_abs_diff(rec.op.matrix(), truth.matrix()) < 1e-5);
  }
}

TEST_CASE("reconstruction is PSD by construction on junk counts") {
  std::vector<Probe> probes = probe_states();
  std::vector<CountRecord> records;
  std::mt19937_64 engine(5);
  for (const auto& probe : probes) {
    CountRecord rec;
    rec.label = probe.label;
    rec.counts = static_cast<double>(engine() % 1000);
    rec.duration = 1.0;
    rec.rate_scale = 500.0;
    records.push_back(rec);
  }
  ReconstructionResult rec = reconstruct(records, probes);
  Eigen::SelfAdjointEigenSolver<Matrix4c> eig(rec.op.matrix(),
                                              Eigen::EigenvaluesOnly);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-12);
}

TEST_CASE("log-likelihood is non-decreasing across iterations") {
  std::vector<Probe> probes = probe_states();
  auto records = simulate_counts(eta_psi_tilde(0.645), probes, 1e4, 1.0, 99);
  ReconstructionResult rec = reconstruct(records, probes);
  for (size_t i = 1; i < rec.ll_history.size(); ++i) {
    CHECK(rec.ll_history[i] >= rec.ll_history[i - 1] - 1e-9);
  }
}

TEST_CASE("all-zero counts return the zero operator with a warning") {
  std::vector<Probe> probes = probe_states();
  std::vector<CountRecord> records;
  for (const auto& probe : probes) {
    records.push_back(CountRecord{probe.label, 0.0, 1.0, 100.0});
  }
  ReconstructionResult rec = reconstruct(records, probes);
  CHECK(rec.all_counts_zero);
  CHECK(rec.op.matrix().isZero(0.0));
}

TEST_CASE("Poisson-noise reconstruction fidelity at mean 1e4") {
  std::vector<Probe> probes = probe_states();
  PolarizationOperator truth = eta_psi_tilde(0.645);
  std::vector<double> fidelities;
  for (int seed = 0; seed < 50; ++seed) {
    auto records = simulate_counts(truth, probes, 1e4, 1.0, 1000 + seed);
    ReconstructionResult rec = reconstruct(records, probes);
    fidelities.push_back(operator_fidelity(rec.op, truth));
  }
  std::sort(fidelities.begin(), fidelities.end());
  double median = fidelities[25];
  CHECK(median >= 0.99);
  // Every seed should land well above the experiment-grade floor.
  CHECK(fidelities.front() >= 0.98);
}

TEST_CASE("statistical scaling: infidelity decreases with counts") {
  std::vector<Probe> probes = probe_states();
  PolarizationOperator truth = eta_psi_tilde(0.4);
  auto median_infidelity = [&](double mean_counts) {
    std::vector<double> inf;
    for (int seed = 0; seed < 21; ++seed) {
      auto records =
          simulate_counts(truth, probes, mean_counts, 1.0, 7000 + seed);
      ReconstructionResult rec = reconstruct(records, probes);
      inf.push_back(1.0 - operator_fidelity(rec.op, truth));
    }
    std::sort(inf.begin(), inf.end());
    return inf[10];
  };
  double i2 = median_infidelity(1e2);
  double i3 = median_infidelity(1e3);
  double i4 = median_infidelity(1e4);
  CHECK(i2 > i3);
  CHECK(i3 > i4);
}

TEST_CASE("linear inversion agrees with ML on noiseless data") {
  std::vector<Probe> probes = probe_states();
  for (int i = 0; i < 20; ++i) {
    PolarizationOperator truth = ts::random_psd();
    std::vector<double> probs = predicted_probabilities(truth, probes);
    Matrix4c direct = linear_inversion(probs, probes);
    CHECK(ts::max_abs_diff(direct, truth.matrix()) < 1e-10);
  }
}

TEST_CASE("rate-scale fitting recovers the operator shape") {
  std::vector<Probe> probes = probe_states();
  PolarizationOperator truth = eta_psi_tilde(0.5);
  // Records whose rate_scale is wrong by 3x.
  auto records = exact_records(truth, probes, 1e4);
  for (auto& rec : records) rec.rate_scale /= 3.0;
  ReconstructionOptions opts;
  opts.fit_rate_scale = true;
  ReconstructionResult rec = reconstruct(records, probes, opts);
  // The multiplier and the factor scale share a flat direction; their
  // product is what the data pin down: multiplier * op / 3 == truth.
  Matrix4c product = rec.fitted_rate_multiplier * rec.op.matrix() / 3.0;
  CHECK(ts::max_abs_diff(product, truth.matrix()) < 1e-6);
  Matrix4c got = rec.op.matrix() / rec.op.trace();
  Matrix4c want = truth.matrix() / truth.trace();
  CHECK(ts::max_abs_diff(got, want) < 1e-6);
}

TEST_CASE("misaligned records raise schema errors") {
  std::vector<Probe> probes = probe_states();
  auto records = exact_records(optics::singlet_projector(), probes, 100.0);
  records[3].label = "XX";
  CHECK_THROWS_AS(reconstruct(records, probes), Error);
  records.pop_back();
  CHECK_THROWS_AS(reconstruct(records, probes), Error);
}

TEST_CASE("noiseless sweep matches the closed-form curves") {
  std::vector<double> t_h_values;
  for (int i = 0; i <= 10; ++i) {
    t_h_values.push_back(0.03 + i * (0.95 - 0.03) / 10.0);
  }
  SweepOptions opts;
  opts.t_v_fixed = 0.458;
  opts.noise.reset();
  std::vector<SweepPoint> points = sweep_reconstruction(t_h_values, opts);
  for (const auto& p : points) {
    double gamma = (p.big_t_h - 0.458) / (p.big_t_h + 0.458);
    CHECK(p.gamma == doctest::Approx(gamma).epsilon(1e-12));
    CHECK(std::abs(p.elem_hvhv - (1.0 + gamma) / 2.0) < 1e-10);
    CHECK(std::abs(p.elem_vhvh - (1.0 - gamma) / 2.0) < 1e-10);
    CHECK(std::abs(p.neg_abs_hvvh + std::sqrt(1.0 - gamma * gamma) / 2.0) <
          1e-10);
    CHECK(p.max_offsector < 1e-10);
    CHECK(p.fidelity >= 1.0 - 1e-9);
  }

  // T_H = T_V: both diagonal elements 1/2, off-diagonal -1/2.
  SweepPoint balanced =
      sweep_reconstruction({0.458}, opts).front();
  CHECK(balanced.elem_hvhv == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(balanced.elem_vhvh == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(balanced.neg_abs_hvvh == doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("noisy sweep stays near the hardware-grade quality figures") {
  std::vector<double> t_h_values;
  for (int i = 0; i <= 8; ++i) {
    t_h_values.push_back(0.03 + i * (0.95 - 0.03) / 8.0);
  }
  SweepOptions opts;
  opts.t_v_fixed = 0.458;
  opts.noise = expsim::nominal_noise_model();
  opts.rate_scale = 5.0;
  opts.duration = 420.0;
  opts.seed = 2024;
  std::vector<SweepPoint> points = sweep_reconstruction(t_h_values, opts);
  double fid_sum = 0.0;
  for (const auto& p : points) {
    CHECK(p.converged);
    fid_sum += p.fidelity;
    CHECK(p.max_offsector < 0.06);  // spurious elements stay small
  }
  double mean_fidelity = fid_sum / points.size();
  CHECK(mean_fidelity >= 0.92);
  CHECK(mean_fidelity <= 0.99);
}
