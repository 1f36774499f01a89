#pragma once

#include "pairproj/schmidt.hpp"
#include "pairproj/types.hpp"

namespace pairproj {
namespace optics {

/// Tunable settings of the variable partially-polarizing beam splitter:
/// transmission amplitudes t_H, t_V in [0,1] and the relative phase delta of
/// t_V (effective amplitude t_V e^{i delta}).
struct VppbsSettings {
  double t_h;
  double t_v;
  double delta = 0.0;

  /// From transmission probabilities T_H = t_H^2, T_V = t_V^2.
  static VppbsSettings from_transmissions(double big_t_h, double big_t_v,
                                          double delta = 0.0);

  /// Splitting ratio gamma = (t_H^2 - t_V^2)/(t_H^2 + t_V^2).
  double gamma() const;
  /// Efficiency factor eta = (t_H^2 + t_V^2)/2.
  double eta() const;

  /// Range-checks both amplitudes; throws Error(validation).
  void validate() const;
};

/// Everything required to realize a target projector: local unitaries, VPPBS
/// settings, and the derived gamma/eta. The six physical degrees of freedom
/// are the two wave plate angle pairs behind ua and ub, delta, and gamma.
struct ProjectorRecipe {
  SingleQubitUnitary ua;
  SingleQubitUnitary ub;
  VppbsSettings vppbs;
  double gamma;
  double eta;
};

/// Polarization-space matrix of a VPPBS in mode a (identity in mode b):
/// diag(t_H, t_H, t_V e^{i delta}, t_V e^{i delta}).
Matrix4c vppbs_operator(const VppbsSettings& settings);

/// Projector onto the antisymmetric singlet (|H_aV_b> - |V_aH_b>)/sqrt(2).
PolarizationOperator singlet_projector();

struct ComposedProjector {
  double eta;
  TwoPhotonState psi_tilde;
  PolarizationOperator op;
};

/// The composed measurement operator W^dag |s><s| W = eta |psi~><psi~| with
/// psi~ = (sqrt(1+gamma)|H_aV_b> - e^{-i delta} sqrt(1-gamma)|V_aH_b>)/sqrt(2).
/// Throws Error(validation) when t_H = t_V = 0.
ComposedProjector compose_projector(const VppbsSettings& settings);

/// Destructive measurement transformation M = |s><s| W = sqrt(eta)|s><psi~|;
/// a successful outcome leaves the photons in the singlet.
Matrix4c destructive_transform(const VppbsSettings& settings);

/// POVM element M^dag M of an arbitrary transformation M.
PolarizationOperator povm_from_transform(const Matrix4c& m);

/// Maximum-efficiency settings for a given splitting ratio: the larger of
/// t_H, t_V is set to 1 (gamma >= 0 picks t_H = 1), delta = 0.
VppbsSettings optimal_settings(double gamma);

/// eta_opt = 1/(1 + |gamma|). Throws Error(domain) outside [-1, 1].
double optimal_efficiency(double gamma);

/// Same optimum as a function of the projected state's concurrence:
/// 1/(1 + sqrt(1 - C^2)).
double optimal_efficiency_from_concurrence(double concurrence);

/// Builds the recipe realizing eta |target><target|: Schmidt-decomposes the
/// target, derives U_a (zeta -> H) and U_b (theta -> V), and picks the
/// optimal-efficiency VPPBS amplitudes with delta = 0 (all phases are pushed
/// into the unitaries).
ProjectorRecipe synthesize_projector(const TwoPhotonState& target);

/// Rebuilds the full measurement operator of a recipe:
/// (U_a (x) U_b)^dag [eta |psi~><psi~|] (U_a (x) U_b).
PolarizationOperator recipe_operator(const ProjectorRecipe& recipe);

}  // namespace optics
}  // namespace pairproj
