#pragma once

#include "pairproj/types.hpp"

namespace pairproj {

enum class WavePlateKind { quarter, half };

/// Jones matrix of an ideal wave plate with its fast axis at `angle` radians
/// from horizontal.
///
/// Convention: the fast-axis component is left unchanged and the slow-axis
/// component is retarded by e^{i*Gamma} (Gamma = pi for a half-wave plate,
/// pi/2 for a quarter-wave plate):
///   J(angle) = R(angle) * diag(1, e^{i*Gamma}) * R(-angle)
/// with R a real rotation. Under this convention a QWP at 0 maps |D> to
/// |R> = (|H> + i|V>)/sqrt(2) and an HWP at 0 is diag(1, -1).
SingleQubitUnitary waveplate_unitary(WavePlateKind kind, double angle);

/// Linearly polarized state |theta> = cos(theta)|H> + sin(theta)|V>.
SingleQubitState linear_polarization_state(double theta);

/// QWP + HWP pair mapping `from` onto the linear polarization `target_angle`
/// (light traverses the QWP first). Returned angles are the plates' fast-axis
/// angles in radians.
struct PlatePair {
  double qwp_angle;
  double hwp_angle;
};
PlatePair plates_mapping_to_linear(const SingleQubitState& from,
                                   double target_angle);

/// Decomposition of a unitary into QWP + HWP plus a residual phase
/// diag(1, e^{i*phi}) and a global phase. Two plates realize the state mapping
/// exactly; `needs_phase_plate` flags |phi| above tolerance, in which case a
/// birefringent element is required for the full unitary.
struct WavePlateDecomposition {
  double qwp_angle;
  double hwp_angle;
  double residual_phase;  // phi of the trailing diag(1, e^{i*phi})
  double global_phase;
  bool needs_phase_plate;
};

/// Decomposes U as e^{i*global} * HWP(h) * QWP(q) * diag(1, e^{i*phi}).
WavePlateDecomposition decompose_unitary(const SingleQubitUnitary& u);

}  // namespace pairproj
