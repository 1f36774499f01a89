#pragma once

#include <cstdint>
#include <random>

namespace pairproj {

/// Deterministic random source. Built on std::mt19937_64 (whose raw output is
/// specified by the standard) with hand-rolled distributions, so a given seed
/// produces the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double uniform();

  /// Standard normal via Box-Muller (no rejection, deterministic draw count).
  double normal();

  /// Poisson draw: inversion below mean 10, Hormann's PTRS transformed
  /// rejection with squeeze above.
  std::int64_t poisson(double mean);

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Stable per-index sub-seed derivation (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace pairproj
