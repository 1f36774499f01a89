#pragma once

#include <Eigen/Dense>
#include <complex>

namespace pairproj {

using Complex = std::complex<double>;
using Vector2c = Eigen::Vector2cd;
using Vector4c = Eigen::Vector4cd;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

// Basis index convention for two-photon amplitudes and 4x4 operators:
// 0 = |H_a H_b>, 1 = |H_a V_b>, 2 = |V_a H_b>, 3 = |V_a V_b>.
enum BasisIndex : int { kHH = 0, kHV = 1, kVH = 2, kVV = 3 };

// Structural tolerance used by validating constructors.
inline constexpr double kStructuralTol = 1e-10;

/// A pure two-photon polarization state: four complex amplitudes
/// (c_HH, c_HV, c_VH, c_VV), unit norm.
class TwoPhotonState {
 public:
  /// Validates unit norm to 1e-10; throws Error(validation) otherwise.
  explicit TwoPhotonState(const Vector4c& amplitudes);

  /// Builds from raw amplitudes, dividing out the norm. Throws on zero vector.
  static TwoPhotonState normalized(const Vector4c& amplitudes);

  const Vector4c& amplitudes() const { return amps_; }
  Complex amp(BasisIndex i) const { return amps_(i); }

  /// Density matrix |psi><psi|.
  Matrix4c projector() const { return amps_ * amps_.adjoint(); }

 private:
  Vector4c amps_;
};

/// A single-qubit pure state (two complex amplitudes, unit norm).
class SingleQubitState {
 public:
  explicit SingleQubitState(const Vector2c& amplitudes);
  static SingleQubitState normalized(const Vector2c& amplitudes);

  const Vector2c& amplitudes() const { return amps_; }

 private:
  Vector2c amps_;
};

/// A 2x2 unitary acting on one photon's polarization.
class SingleQubitUnitary {
 public:
  /// Validates U^dag U = I to 1e-10.
  explicit SingleQubitUnitary(const Matrix2c& matrix);

  static SingleQubitUnitary identity();

  const Matrix2c& matrix() const { return mat_; }

 private:
  Matrix2c mat_;
};

/// A Hermitian positive-semidefinite 4x4 operator in the two-photon basis
/// (projector, POVM element, or scaled projector).
class PolarizationOperator {
 public:
  /// Validates Hermiticity to 1e-10 and eigenvalues >= -1e-10.
  explicit PolarizationOperator(const Matrix4c& matrix);

  const Matrix4c& matrix() const { return mat_; }
  double trace() const { return mat_.trace().real(); }

 private:
  Matrix4c mat_;
};

// Named single-qubit states. |D> = (|H>+|V>)/sqrt(2), |R> = (|H>+i|V>)/sqrt(2).
SingleQubitState state_h();
SingleQubitState state_v();
SingleQubitState state_d();
SingleQubitState state_a();
SingleQubitState state_r();
SingleQubitState state_l();

/// The antisymmetric singlet (|H_aV_b> - |V_aH_b>)/sqrt(2).
TwoPhotonState singlet_state();

/// Product state of two single-photon states: c_jk = a_j * b_k.
TwoPhotonState tensor_state(const SingleQubitState& qubit_a,
                            const SingleQubitState& qubit_b);

/// Applies U_a (x) U_b to the state.
TwoPhotonState apply_local_unitaries(const TwoPhotonState& state,
                                     const SingleQubitUnitary& ua,
                                     const SingleQubitUnitary& ub);

/// Kronecker product of two 2x2 matrices in the basis convention above.
Matrix4c kron(const Matrix2c& a, const Matrix2c& b);

/// |<a|b>| -- the global-phase-insensitive comparison between pure states.
double state_fidelity(const TwoPhotonState& a, const TwoPhotonState& b);
double state_fidelity(const SingleQubitState& a, const SingleQubitState& b);

/// <state|op|state>, guaranteed real for Hermitian op.
double expectation(const PolarizationOperator& op, const TwoPhotonState& state);

}  // namespace pairproj
