#include "pairproj/entanglement.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "pairproj/error.hpp"

namespace pairproj {

namespace {

constexpr double kZeroTraceTol = 1e-14;

// Square roots of eigenvalues clamped against solver noise: values below
// 1e-14 of the largest are rounding artifacts whose square roots would
// otherwise contribute at the 1e-8 level.
Eigen::Vector4d noise_clamped_roots(const Eigen::Vector4d& eigenvalues) {
  double top = std::max(eigenvalues.maxCoeff(), 0.0);
  double floor = 1e-14 * top;
  Eigen::Vector4d out;
  for (int i = 0; i < 4; ++i) {
    out(i) = eigenvalues(i) > floor ? std::sqrt(eigenvalues(i)) : 0.0;
  }
  return out;
}

Matrix4c normalized_by_trace(const Matrix4c& m, const char* what) {
  double tr = m.trace().real();
  if (tr < kZeroTraceTol) {
    throw Error(ErrorKind::domain,
                std::string(what) + ": operator trace is zero");
  }
  return m / tr;
}

// sigma_y (x) sigma_y, the two-qubit spin-flip matrix.
Matrix4c spin_flip() {
  Matrix4c f = Matrix4c::Zero();
  f(0, 3) = -1.0;
  f(1, 2) = 1.0;
  f(2, 1) = 1.0;
  f(3, 0) = -1.0;
  return f;
}

}  // namespace

Matrix4c psd_sqrt(const Matrix4c& m) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(m);
  Eigen::Vector4d vals = solver.eigenvalues().cwiseMax(0.0);
  Eigen::Vector4d roots = vals.cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() *
         solver.eigenvectors().adjoint();
}

double concurrence_pure(const TwoPhotonState& state) {
  Complex det = state.amp(kHH) * state.amp(kVV) - state.amp(kHV) * state.amp(kVH);
  return 2.0 * std::abs(det);
}

double concurrence_mixed(const PolarizationOperator& op) {
  Matrix4c rho = normalized_by_trace(op.matrix(), "concurrence_mixed");
  Matrix4c flip = spin_flip();
  Matrix4c rho_tilde = flip * rho.conjugate() * flip;
  // Eigenvalues of rho * rho_tilde through the Hermitian form
  // sqrt(rho) * rho_tilde * sqrt(rho), which shares its spectrum.
  Matrix4c root = psd_sqrt(rho);
  Matrix4c r = root * rho_tilde * root;
  r = (Matrix4c(r + r.adjoint())) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(r, Eigen::EigenvaluesOnly);
  Eigen::Vector4d mu = noise_clamped_roots(solver.eigenvalues());
  std::sort(mu.data(), mu.data() + 4, std::greater<double>());
  return std::max(0.0, mu(0) - mu(1) - mu(2) - mu(3));
}

double operator_fidelity(const PolarizationOperator& a,
                         const PolarizationOperator& b) {
  Matrix4c an = normalized_by_trace(a.matrix(), "operator_fidelity");
  Matrix4c bn = normalized_by_trace(b.matrix(), "operator_fidelity");
  Matrix4c root_a = psd_sqrt(an);
  Matrix4c inner = root_a * bn * root_a;
  inner = (Matrix4c(inner + inner.adjoint())) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(inner, Eigen::EigenvaluesOnly);
  return noise_clamped_roots(solver.eigenvalues()).sum();
}

}  // namespace pairproj
