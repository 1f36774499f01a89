#include "pairproj/schmidt.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace pairproj {

namespace {

// Multiplies u by the phase making its largest-magnitude entry real positive
// and applies the same phase to v so the dyad u v^dag is unchanged.
void fix_pair_phase(Vector2c& u, Vector2c& v) {
  int idx = std::abs(u(0)) >= std::abs(u(1)) ? 0 : 1;
  if (std::abs(u(idx)) == 0.0) return;
  Complex phase = u(idx) / std::abs(u(idx));
  u /= phase;
  v /= phase;
}

}  // namespace

TwoPhotonState SchmidtForm::reconstruct() const {
  Vector4c amps =
      lambda1 * tensor_state(zeta, theta).amplitudes() -
      lambda2 * tensor_state(zeta_perp, theta_perp).amplitudes();
  return TwoPhotonState(amps);
}

SchmidtForm schmidt_decompose(const TwoPhotonState& state) {
  Matrix2c c;
  c << state.amp(kHH), state.amp(kHV), state.amp(kVH), state.amp(kVV);

  // SVD of c through the Hermitian product c c^dag; singular vectors ordered
  // by descending singular value.
  Eigen::SelfAdjointEigenSolver<Matrix2c> solver(c * c.adjoint());
  double e0 = std::max(solver.eigenvalues()(1), 0.0);  // Eigen sorts ascending
  double e1 = std::max(solver.eigenvalues()(0), 0.0);
  double sigma1 = std::sqrt(e0);
  double sigma2 = std::sqrt(e1);
  Vector2c u1 = solver.eigenvectors().col(1);
  Vector2c u2 = solver.eigenvectors().col(0);

  Vector2c v1, v2;
  if (sigma1 > 0.0) {
    v1 = c.adjoint() * u1 / sigma1;
  } else {
    v1 = Vector2c(1.0, 0.0);
  }
  if (sigma2 > 1e-14) {
    v2 = c.adjoint() * u2 / sigma2;
    // Polish orthogonality, which degrades when sigma2 is small.
    v2 -= v1 * v1.dot(v2);
    double n = v2.norm();
    if (n > 1e-8) {
      v2 /= n;
    } else {
      v2 = Vector2c(-std::conj(v1(1)), std::conj(v1(0)));
    }
  } else {
    // Rank deficient: complete v1 to an orthonormal basis.
    v2 = Vector2c(-std::conj(v1(1)), std::conj(v1(0)));
  }

  fix_pair_phase(u1, v1);
  fix_pair_phase(u2, v2);

  // c = sigma1 u1 v1^dag + sigma2 u2 v2^dag and psi_jk = c_jk, so the b-side
  // states are the conjugated right singular vectors; the form's minus sign
  // is absorbed into theta_perp.
  SchmidtForm form{
      sigma1,
      sigma2,
      SingleQubitState::normalized(u1),
      SingleQubitState::normalized(v1.conjugate()),
      SingleQubitState::normalized(u2),
      SingleQubitState::normalized(-v2.conjugate()),
  };
  return form;
}

}  // namespace pairproj
