#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pairproj/expsim.hpp"
#include "pairproj/types.hpp"

namespace pairproj {
namespace tomo {

/// One labeled probe state.
struct Probe {
  std::string label;
  TwoPhotonState state;
};

/// The sixteen {H,V,D,R} x {H,V,D,R} probe states in a fixed order: the
/// a-photon's polarization cycles fastest (HH, VH, DH, RH, HV, ...). The
/// first label character is the a-photon, the second the b-photon.
std::vector<Probe> probe_states();

/// <phi_k|op|phi_k> for every probe.
std::vector<double> predicted_probabilities(const PolarizationOperator& op,
                                            const std::vector<Probe>& probes);

/// One coincidence measurement record. `rate_scale` is the calibration
/// constant: expected counts per unit outcome probability over the full
/// acquisition (duration is kept for rate reporting).
struct CountRecord {
  std::string label;
  double counts = 0.0;  // real-valued so exact expected counts can be fed back
  double duration = 1.0;
  double rate_scale = 1.0;
};

/// Draws Poisson counts with mean rate_scale * probability for each probe.
/// Deterministic for a fixed seed.
std::vector<CountRecord> simulate_counts(const PolarizationOperator& op,
                                         const std::vector<Probe>& probes,
                                         double rate_scale, double duration,
                                         std::uint64_t seed);

struct ReconstructionOptions {
  int max_iterations = 400;
  double gradient_tol = 1e-9;
  double rel_ll_tol = 1e-12;
  /// Fit a global rate multiplier as a 17th parameter (use when rate_scale
  /// is uncalibrated; the returned operator is then meaningful up to scale).
  bool fit_rate_scale = false;
};

struct ReconstructionResult {
  PolarizationOperator op;
  /// Poisson log-likelihood relative to the saturated model (-deviance/2);
  /// 0 means a perfect fit.
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  bool all_counts_zero = false;
  double fitted_rate_multiplier = 1.0;
  std::vector<double> ll_history;
};

/// Maximum-likelihood reconstruction of the closest Hermitian PSD operator:
/// maximizes the Poisson log-likelihood sum_k [n_k log mu_k - mu_k] with
/// mu_k = rate_scale_k <phi_k|T^dag T|phi_k> over a lower-triangular factor T
/// (16 real parameters), by damped Newton ascent with backtracking from the
/// scaled-identity start.
ReconstructionResult reconstruct(const std::vector<CountRecord>& records,
                                 const std::vector<Probe>& probes,
                                 const ReconstructionOptions& options = {});

/// Direct linear inversion of probabilities to a Hermitian operator (not
/// necessarily PSD). Exact for noiseless data; used as an independent check.
Matrix4c linear_inversion(const std::vector<double>& probabilities,
                          const std::vector<Probe>& probes);

/// One point of a transmission sweep.
struct SweepPoint {
  double big_t_h;          // swept transmission probability
  double gamma;            // ideal splitting ratio at this point
  double eta;              // ideal efficiency
  Matrix4c normalized_op;  // reconstructed, trace-normalized
  double elem_hvhv;        // <H_aV_b|Pi|H_aV_b> of the normalized operator
  double elem_vhvh;        // <V_aH_b|Pi|V_aH_b>
  Complex elem_hvvh;       // signed <H_aV_b|Pi|V_aH_b>
  double neg_abs_hvvh;     // -|<H_aV_b|Pi|V_aH_b>|, the plotted convention
  double max_offsector;    // largest |element| outside the HV/VH block
  double fidelity;         // against the ideal normalized projector
  double concurrence;      // Wootters concurrence of the normalized operator
  bool converged;
};

struct SweepOptions {
  double t_v_fixed = 0.458;      // fixed transmission probability T_V
  double rate_scale = 2000.0;    // expected counts per unit probability
  double duration = 420.0;
  std::uint64_t seed = 1;
  /// Empty noise model (all-ideal) reproduces theory exactly; counts are then
  /// taken as exact expectations rather than Poisson draws.
  std::optional<expsim::NoiseModel> noise;
};

/// Reconstructs the measurement operator across a T_H sweep at fixed T_V,
/// normalizing out eta from each reconstruction. Per-point seeds derive from
/// the master seed, so points are independent.
std::vector<SweepPoint> sweep_reconstruction(
    const std::vector<double>& big_t_h_values, const SweepOptions& options);

}  // namespace tomo
}  // namespace pairproj
