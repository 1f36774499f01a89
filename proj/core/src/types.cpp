#include "pairproj/types.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "pairproj/error.hpp"

namespace pairproj {

namespace {

void require_unit_norm(double norm2, const char* what) {
  // The negated form also rejects NaN amplitudes.
  if (!(std::abs(norm2 - 1.0) <= kStructuralTol)) {
    throw Error(ErrorKind::validation,
                std::string(what) + " is not normalized (|norm^2 - 1| = " +
                    std::to_string(std::abs(norm2 - 1.0)) + ")");
  }
}

}  // namespace

TwoPhotonState::TwoPhotonState(const Vector4c& amplitudes) : amps_(amplitudes) {
  require_unit_norm(amps_.squaredNorm(), "two-photon state");
}

TwoPhotonState TwoPhotonState::normalized(const Vector4c& amplitudes) {
  double n = amplitudes.norm();
  if (n <= 0.0) {
    throw Error(ErrorKind::validation, "cannot normalize a zero state vector");
  }
  return TwoPhotonState(Vector4c(amplitudes / n));
}

SingleQubitState::SingleQubitState(const Vector2c& amplitudes)
    : amps_(amplitudes) {
  require_unit_norm(amps_.squaredNorm(), "single-qubit state");
}

SingleQubitState SingleQubitState::normalized(const Vector2c& amplitudes) {
  double n = amplitudes.norm();
  if (n <= 0.0) {
    throw Error(ErrorKind::validation, "cannot normalize a zero state vector");
  }
  return SingleQubitState(Vector2c(amplitudes / n));
}

SingleQubitUnitary::SingleQubitUnitary(const Matrix2c& matrix) : mat_(matrix) {
  Matrix2c residual = mat_.adjoint() * mat_ - Matrix2c::Identity();
  if (!(residual.cwiseAbs().maxCoeff() <= kStructuralTol)) {
    throw Error(ErrorKind::validation, "matrix is not unitary to 1e-10");
  }
}

SingleQubitUnitary SingleQubitUnitary::identity() {
  return SingleQubitUnitary(Matrix2c::Identity());
}

PolarizationOperator::PolarizationOperator(const Matrix4c& matrix)
    : mat_(matrix) {
  Matrix4c herm_residual = mat_ - mat_.adjoint();
  if (!(herm_residual.cwiseAbs().maxCoeff() <= kStructuralTol)) {
    throw Error(ErrorKind::validation, "operator is not Hermitian to 1e-10");
  }
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(mat_, Eigen::EigenvaluesOnly);
  if (!(solver.eigenvalues().minCoeff() >= -kStructuralTol)) {
    throw Error(ErrorKind::validation,
                "operator has an eigenvalue below -1e-10 (not PSD)");
  }
}

SingleQubitState state_h() { return SingleQubitState(Vector2c(1.0, 0.0)); }
SingleQubitState state_v() { return SingleQubitState(Vector2c(0.0, 1.0)); }

SingleQubitState state_d() {
  return SingleQubitState(Vector2c(1.0, 1.0) / std::sqrt(2.0));
}

SingleQubitState state_a() {
  return SingleQubitState(Vector2c(1.0, -1.0) / std::sqrt(2.0));
}

SingleQubitState state_r() {
  return SingleQubitState(Vector2c(Complex(1.0, 0.0), Complex(0.0, 1.0)) /
                          std::sqrt(2.0));
}

SingleQubitState state_l() {
  return SingleQubitState(Vector2c(Complex(1.0, 0.0), Complex(0.0, -1.0)) /
                          std::sqrt(2.0));
}

TwoPhotonState singlet_state() {
  Vector4c v = Vector4c::Zero();
  v(kHV) = 1.0 / std::sqrt(2.0);
  v(kVH) = -1.0 / std::sqrt(2.0);
  return TwoPhotonState(v);
}

TwoPhotonState tensor_state(const SingleQubitState& qubit_a,
                            const SingleQubitState& qubit_b) {
  const Vector2c& a = qubit_a.amplitudes();
  const Vector2c& b = qubit_b.amplitudes();
  Vector4c out;
  out(kHH) = a(0) * b(0);
  out(kHV) = a(0) * b(1);
  out(kVH) = a(1) * b(0);
  out(kVV) = a(1) * b(1);
  return TwoPhotonState(out);
}

Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    }
  }
  return out;
}

TwoPhotonState apply_local_unitaries(const TwoPhotonState& state,
                                     const SingleQubitUnitary& ua,
                                     const SingleQubitUnitary& ub) {
  Vector4c out = kron(ua.matrix(), ub.matrix()) * state.amplitudes();
  return TwoPhotonState(out);
}

double state_fidelity(const TwoPhotonState& a, const TwoPhotonState& b) {
  return std::abs(a.amplitudes().dot(b.amplitudes()));
}

double state_fidelity(const SingleQubitState& a, const SingleQubitState& b) {
  return std::abs(a.amplitudes().dot(b.amplitudes()));
}

double expectation(const PolarizationOperator& op, const TwoPhotonState& state) {
  Complex value = state.amplitudes().dot(op.matrix() * state.amplitudes());
  return value.real();
}

}  // namespace pairproj
