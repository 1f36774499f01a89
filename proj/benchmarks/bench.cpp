#include <benchmark/benchmark.h>

#include <random>

#include "pairproj/entanglement.hpp"
#include "pairproj/expsim.hpp"
#include "pairproj/fock.hpp"
#include "pairproj/optics.hpp"
#include "pairproj/schmidt.hpp"
#include "pairproj/tomography.hpp"

using namespace pairproj;

namespace {

optics::VppbsSettings settings_for(int i) {
  double t = 0.05 + 0.9 * ((i * 37) % 100) / 100.0;
  return optics::VppbsSettings{t, 1.0 - 0.5 * t, 0.3};
}

TwoPhotonState pseudo_state(int i) {
  std::mt19937_64 engine(17 + i);
  std::normal_distribution<double> dist;
  Vector4c v;
  for (int k = 0; k < 4; ++k) v(k) = Complex(dist(engine), dist(engine));
  return TwoPhotonState::normalized(v);
}

void bm_compose_projector(benchmark::State& state) {
  int i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(optics::compose_projector(settings_for(i++)));
  }
}
BENCHMARK(bm_compose_projector);

void bm_oracle_povm(benchmark::State& state) {
  int i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fock::oracle_povm(settings_for(i++)));
  }
}
BENCHMARK(bm_oracle_povm);

void bm_schmidt_decompose(benchmark::State& state) {
  int i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(schmidt_decompose(pseudo_state(i++ % 64)));
  }
}
BENCHMARK(bm_schmidt_decompose);

void bm_synthesize_projector(benchmark::State& state) {
  int i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        optics::synthesize_projector(pseudo_state(i++ % 64)));
  }
}
BENCHMARK(bm_synthesize_projector);

void bm_operator_fidelity(benchmark::State& state) {
  PolarizationOperator a =
      optics::compose_projector(settings_for(3)).op;
  PolarizationOperator b =
      optics::compose_projector(settings_for(11)).op;
  for (auto _ : state) {
    benchmark::DoNotOptimize(operator_fidelity(a, b));
  }
}
BENCHMARK(bm_operator_fidelity);

void bm_reconstruct_noiseless(benchmark::State& state) {
  auto probes = tomo::probe_states();
  PolarizationOperator truth =
      optics::compose_projector(optics::optimal_settings(0.645)).op;
  std::vector<tomo::CountRecord> records;
  for (const auto& probe : probes) {
    records.push_back(tomo::CountRecord{
        probe.label, 1e4 * expectation(truth, probe.state), 1.0, 1e4});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(tomo::reconstruct(records, probes));
  }
}
BENCHMARK(bm_reconstruct_noiseless);

void bm_reconstruct_poisson(benchmark::State& state) {
  auto probes = tomo::probe_states();
  PolarizationOperator truth =
      optics::compose_projector(optics::optimal_settings(0.645)).op;
  auto records = tomo::simulate_counts(truth, probes, 1e4, 1.0, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tomo::reconstruct(records, probes));
  }
}
BENCHMARK(bm_reconstruct_poisson);

void bm_delay_scan(benchmark::State& state) {
  expsim::DelayScanRequest req;
  req.points = 101;
  TwoPhotonState in = tensor_state(state_h(), state_h());
  optics::VppbsSettings s{1.0, 1.0, 0.0};
  expsim::NoiseModel noise = expsim::ideal_noise_model();
  for (auto _ : state) {
    benchmark::DoNotOptimize(expsim::coincidence_vs_delay(in, s, req, noise));
  }
}
BENCHMARK(bm_delay_scan);

}  // namespace

BENCHMARK_MAIN();
