#include "pairproj/optics.hpp"

#include <cmath>

#include "pairproj/error.hpp"

namespace pairproj {
namespace optics {

namespace {

void require_amplitude(double t, const char* name) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorKind::validation,
                std::string(name) + " must lie in [0, 1]");
  }
}

}  // namespace

VppbsSettings VppbsSettings::from_transmissions(double big_t_h, double big_t_v,
                                                double delta) {
  if (!(big_t_h >= 0.0 && big_t_h <= 1.0) ||
      !(big_t_v >= 0.0 && big_t_v <= 1.0)) {
    throw Error(ErrorKind::validation,
                "transmission probabilities must lie in [0, 1]");
  }
  return VppbsSettings{std::sqrt(big_t_h), std::sqrt(big_t_v), delta};
}

double VppbsSettings::gamma() const {
  double sum = t_h * t_h + t_v * t_v;
  if (sum <= 0.0) {
    throw Error(ErrorKind::validation,
                "gamma undefined for t_H = t_V = 0");
  }
  return (t_h * t_h - t_v * t_v) / sum;
}

double VppbsSettings::eta() const { return 0.5 * (t_h * t_h + t_v * t_v); }

void VppbsSettings::validate() const {
  require_amplitude(t_h, "t_H");
  require_amplitude(t_v, "t_V");
}

Matrix4c vppbs_operator(const VppbsSettings& settings) {
  settings.validate();
  Complex tv = settings.t_v * std::exp(Complex(0.0, settings.delta));
  Matrix4c w = Matrix4c::Zero();
  w(kHH, kHH) = settings.t_h;
  w(kHV, kHV) = settings.t_h;
  w(kVH, kVH) = tv;
  w(kVV, kVV) = tv;
  return w;
}

PolarizationOperator singlet_projector() {
  return PolarizationOperator(singlet_state().projector());
}

ComposedProjector compose_projector(const VppbsSettings& settings) {
  settings.validate();
  if (settings.t_h == 0.0 && settings.t_v == 0.0) {
    throw Error(ErrorKind::validation,
                "degenerate settings: t_H = t_V = 0 blocks both photons");
  }
  Matrix4c w = vppbs_operator(settings);
  Matrix4c op = w.adjoint() * singlet_projector().matrix() * w;

  double eta = settings.eta();
  double gamma = settings.gamma();
  Vector4c psi = Vector4c::Zero();
  psi(kHV) = std::sqrt((1.0 + gamma) / 2.0);
  psi(kVH) = -std::exp(Complex(0.0, -settings.delta)) *
             std::sqrt((1.0 - gamma) / 2.0);
  return ComposedProjector{eta, TwoPhotonState(psi), PolarizationOperator(op)};
}

Matrix4c destructive_transform(const VppbsSettings& settings) {
  settings.validate();
  if (settings.t_h == 0.0 && settings.t_v == 0.0) {
    throw Error(ErrorKind::validation,
                "degenerate settings: t_H = t_V = 0 blocks both photons");
  }
  return singlet_projector().matrix() * vppbs_operator(settings);
}

PolarizationOperator povm_from_transform(const Matrix4c& m) {
  return PolarizationOperator(m.adjoint() * m);
}

VppbsSettings optimal_settings(double gamma) {
  if (!(gamma >= -1.0 && gamma <= 1.0)) {
    throw Error(ErrorKind::domain, "gamma must lie in [-1, 1]");
  }
  if (gamma >= 0.0) {
    return VppbsSettings{1.0, std::sqrt((1.0 - gamma) / (1.0 + gamma)), 0.0};
  }
  return VppbsSettings{std::sqrt((1.0 + gamma) / (1.0 - gamma)), 1.0, 0.0};
}

double optimal_efficiency(double gamma) {
  if (!(gamma >= -1.0 && gamma <= 1.0)) {
    throw Error(ErrorKind::domain, "gamma must lie in [-1, 1]");
  }
  return 1.0 / (1.0 + std::abs(gamma));
}

double optimal_efficiency_from_concurrence(double concurrence) {
  if (!(concurrence >= 0.0 && concurrence <= 1.0)) {
    throw Error(ErrorKind::domain, "concurrence must lie in [0, 1]");
  }
  return 1.0 / (1.0 + std::sqrt(1.0 - concurrence * concurrence));
}

ProjectorRecipe synthesize_projector(const TwoPhotonState& target) {
  SchmidtForm schmidt = schmidt_decompose(target);

  // gamma from lambda1^2 = (1+gamma)/2; separable targets take the
  // gamma = +1 branch (t_V = 0).
  double gamma = schmidt.lambda1 * schmidt.lambda1 -
                 schmidt.lambda2 * schmidt.lambda2;
  VppbsSettings settings = optimal_settings(gamma);

  // U_a maps zeta -> |H| and zeta_perp -> |V|; U_b maps theta -> |V> and
  // theta_perp -> |H>, so that U_a (x) U_b sends the target onto
  // lambda1|HV> - lambda2|VH> = |psi~>.
  Matrix2c ua;
  ua.row(0) = schmidt.zeta.amplitudes().adjoint();
  ua.row(1) = schmidt.zeta_perp.amplitudes().adjoint();
  Matrix2c ub;
  ub.row(0) = schmidt.theta_perp.amplitudes().adjoint();
  ub.row(1) = schmidt.theta.amplitudes().adjoint();

  return ProjectorRecipe{SingleQubitUnitary(ua), SingleQubitUnitary(ub),
                         settings, gamma, settings.eta()};
}

PolarizationOperator recipe_operator(const ProjectorRecipe& recipe) {
  Matrix4c u = kron(recipe.ua.matrix(), recipe.ub.matrix());
  Matrix4c tilde = compose_projector(recipe.vppbs).op.matrix();
  return PolarizationOperator(u.adjoint() * tilde * u);
}

}  // namespace optics
}  // namespace pairproj
