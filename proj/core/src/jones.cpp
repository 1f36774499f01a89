#include "pairproj/jones.hpp"

#include <cmath>

#include "pairproj/error.hpp"

namespace pairproj {

namespace {

Matrix2c rotation(double angle) {
  double c = std::cos(angle), s = std::sin(angle);
  Matrix2c r;
  r << c, -s, s, c;
  return r;
}

Matrix2c retarder(double gamma, double angle) {
  Matrix2c d = Matrix2c::Zero();
  d(0, 0) = 1.0;
  d(1, 1) = std::exp(Complex(0.0, gamma));
  return rotation(angle) * d * rotation(-angle);
}

// Stokes parameters of a single-qubit amplitude pair.
void stokes(const Vector2c& a, double& s1, double& s2, double& s3) {
  s1 = std::norm(a(0)) - std::norm(a(1));
  Complex cross = std::conj(a(0)) * a(1);
  s2 = 2.0 * cross.real();
  s3 = 2.0 * cross.imag();
}

double wrap_angle(double phi) {
  while (phi > M_PI) phi -= 2.0 * M_PI;
  while (phi <= -M_PI) phi += 2.0 * M_PI;
  return phi;
}

}  // namespace

SingleQubitUnitary waveplate_unitary(WavePlateKind kind, double angle) {
  double gamma = (kind == WavePlateKind::half) ? M_PI : M_PI / 2.0;
  return SingleQubitUnitary(retarder(gamma, angle));
}

SingleQubitState linear_polarization_state(double theta) {
  return SingleQubitState(Vector2c(std::cos(theta), std::sin(theta)));
}

PlatePair plates_mapping_to_linear(const SingleQubitState& from,
                                   double target_angle) {
  double s1, s2, s3;
  stokes(from.amplitudes(), s1, s2, s3);
  // A QWP aligned with the polarization ellipse's orientation removes the
  // circular component.
  double orientation = 0.5 * std::atan2(s2, s1);
  Vector2c lin =
      waveplate_unitary(WavePlateKind::quarter, orientation).matrix() *
      from.amplitudes();
  double l1, l2, l3;
  stokes(lin, l1, l2, l3);
  double linear_angle = 0.5 * std::atan2(l2, l1);
  // An HWP at h reflects linear polarization angles about h.
  double hwp = 0.5 * (target_angle + linear_angle);
  return PlatePair{orientation, hwp};
}

WavePlateDecomposition decompose_unitary(const SingleQubitUnitary& u) {
  // zeta = U^dag |H> is the state U maps onto |H>.
  Vector2c zeta = u.matrix().adjoint() * Vector2c(1.0, 0.0);
  PlatePair plates =
      plates_mapping_to_linear(SingleQubitState(zeta), 0.0);
  Matrix2c p =
      waveplate_unitary(WavePlateKind::half, plates.hwp_angle).matrix() *
      waveplate_unitary(WavePlateKind::quarter, plates.qwp_angle).matrix();
  // U P^dag is diagonal because both map zeta to |H> up to phase.
  Matrix2c n = u.matrix() * p.adjoint();
  double off = std::max(std::abs(n(0, 1)), std::abs(n(1, 0)));
  if (off > 1e-9) {
    throw Error(ErrorKind::validation,
                "wave plate decomposition failed to diagonalize the residual");
  }
  double global = std::arg(n(0, 0));
  double residual = wrap_angle(std::arg(n(1, 1)) - global);
  WavePlateDecomposition out;
  out.qwp_angle = plates.qwp_angle;
  out.hwp_angle = plates.hwp_angle;
  out.residual_phase = residual;
  out.global_phase = global;
  out.needs_phase_plate = std::abs(residual) > 1e-9;
  return out;
}

}  // namespace pairproj
