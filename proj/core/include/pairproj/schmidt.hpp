#pragma once

#include "pairproj/types.hpp"

namespace pairproj {

/// Schmidt form of a two-photon pure state,
///   |psi> = lambda1 |zeta theta> - lambda2 |zeta_perp theta_perp>,
/// with lambda1 >= lambda2 >= 0, lambda1^2 + lambda2^2 = 1, and the minus
/// sign absorbed into theta_perp.
struct SchmidtForm {
  double lambda1;
  double lambda2;
  SingleQubitState zeta;
  SingleQubitState theta;
  SingleQubitState zeta_perp;
  SingleQubitState theta_perp;

  /// Rebuilds lambda1|zeta theta> - lambda2|zeta_perp theta_perp>.
  TwoPhotonState reconstruct() const;
};

/// Schmidt decomposition via SVD of the 2x2 coefficient matrix
/// [c_HH c_HV; c_VH c_VV]. Phases are fixed so each local basis vector's
/// largest-magnitude component is real positive; for degenerate singular
/// values the basis is whichever the eigensolver returns.
SchmidtForm schmidt_decompose(const TwoPhotonState& state);

}  // namespace pairproj
