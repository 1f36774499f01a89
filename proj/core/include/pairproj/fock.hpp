#pragma once

#include <map>
#include <utility>
#include <vector>

#include "pairproj/optics.hpp"
#include "pairproj/types.hpp"

namespace pairproj {
namespace fock {

// Mode labels for the standard 8-mode train. r1/r2 are the reflected (loss)
// modes of the first and second VPPBS pass.
enum Mode : int {
  kModeAH = 0,
  kModeAV = 1,
  kModeBH = 2,
  kModeBV = 3,
  kModeR1H = 4,
  kModeR1V = 5,
  kModeR2H = 6,
  kModeR2V = 7,
};
inline constexpr int kStandardModeCount = 8;

/// Two-photon Fock state over a fixed set of bosonic modes, stored as
/// coefficients beta_ij of raw creation products a^dag_i a^dag_j |0> with
/// i <= j. The two-photon cap is structural: no higher occupancy is
/// representable.
class FockState {
 public:
  explicit FockState(int mode_count);

  int mode_count() const { return mode_count_; }

  /// Adds beta * a^dag_i a^dag_j |0> (indices in either order).
  void add_product(int i, int j, const Complex& beta);

  /// Amplitude of the normalized ket |1_i 1_j> (i != j) or |2_i> (i == j).
  Complex amplitude(int i, int j) const;

  double squared_norm() const;

  const std::map<std::pair<int, int>, Complex>& raw_terms() const {
    return terms_;
  }

 private:
  int mode_count_;
  std::map<std::pair<int, int>, Complex> terms_;
};

/// Heisenberg-picture substitution rules: each input creation operator is
/// replaced by a linear combination of output creation operators.
struct ModeMap {
  int mode_count = 0;
  // rules[i] lists (output mode, coefficient) pairs for input mode i.
  std::vector<std::vector<std::pair<int, Complex>>> rules;

  static ModeMap identity(int mode_count);

  /// Composition: apply *this first, then `next`.
  ModeMap then(const ModeMap& next) const;

  /// Dense matrix whose column i is the image of input mode i.
  Eigen::MatrixXcd matrix() const;
};

/// (c_HH a^dag_H b^dag_H + ...)|0>: one photon in an a-mode and one in a
/// b-mode of the standard registry.
FockState inject_state(const TwoPhotonState& state);

/// Substitutes every creation operator and expands products with bosonic
/// bookkeeping. Throws Error(config) when an occupied mode has no rule.
FockState apply_mode_map(const FockState& state, const ModeMap& map);

/// 50:50 beam splitter between spatial modes a and b (polarization
/// preserving): a_j -> (a_j + i b_j)/sqrt(2), b_j -> (b_j + i a_j)/sqrt(2).
ModeMap beam_splitter_map();

/// VPPBS in mode a with loss routed to the given reflected bank (1 or 2):
/// a_j -> t_j a_j + i sqrt(1 - |t_j|^2) r_j. delta multiplies t_V by
/// e^{i delta} in this map, identically for both passes.
ModeMap vppbs_map(const optics::VppbsSettings& settings, int reflected_bank);

/// VPPBS -> 50:50 BS -> VPPBS, the full input-output relations.
ModeMap build_full_train(const optics::VppbsSettings& settings);

/// VPPBS -> 50:50 BS (no second VPPBS): the destructive measurement train
/// whose POVM is M^dag M.
ModeMap build_destructive_train(const optics::VppbsSettings& settings);

struct PostSelection {
  /// Unnormalized amplitudes on {|H_aH_b>, |H_aV_b>, |V_aH_b>, |V_aV_b>}.
  Vector4c amplitudes;
  /// Success probability (their squared norm).
  double probability;
};

/// Keeps only the coincidence terms a^dag_j b^dag_k; everything else
/// (bunched or lost photons) is discarded.
PostSelection post_select_coincidence(const FockState& state);

/// Post-selected polarization-space linear map of a train, reconstructed by
/// probing with the four basis states plus twelve pairwise superpositions and
/// solving the (overdetermined, consistent) linear system.
Matrix4c post_selected_map(const ModeMap& train);

/// First-principles POVM of the measurement: M^dag M for the destructive
/// train's post-selected map M.
PolarizationOperator oracle_povm(const optics::VppbsSettings& settings);

/// Coincidence probability when the b-mode photon occupies a temporal mode
/// orthogonal to the a-mode photon's (fully distinguishable photons), for the
/// destructive train. Computed on a doubled mode registry.
double distinguishable_coincidence_probability(
    const TwoPhotonState& input, const optics::VppbsSettings& settings);

}  // namespace fock
}  // namespace pairproj
