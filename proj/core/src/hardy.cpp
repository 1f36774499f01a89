#include "pairproj/hardy.hpp"

#include <cmath>

#include "pairproj/error.hpp"

namespace pairproj {
namespace hardy {

HardyAngles hardy_angles(double gamma) {
  if (!(std::abs(gamma) < 1.0)) {
    throw Error(ErrorKind::domain,
                "hardy_angles requires |gamma| < 1 (the angle ratio diverges)");
  }
  double ratio = (1.0 + gamma) / (1.0 - gamma);
  double alpha = std::atan(std::pow(ratio, 0.25));
  double beta = std::atan(-std::pow(ratio, 0.75));
  return HardyAngles{alpha, beta, alpha + M_PI / 2.0, beta + M_PI / 2.0};
}

double joint_probability(double theta1, double theta2, double gamma,
                         double eta) {
  if (!(std::abs(gamma) <= 1.0)) {
    throw Error(ErrorKind::domain, "gamma must lie in [-1, 1]");
  }
  double amp = std::sqrt(1.0 + gamma) * std::cos(theta1) * std::sin(theta2) -
               std::sqrt(1.0 - gamma) * std::sin(theta1) * std::cos(theta2);
  return eta * amp * amp / 2.0;
}

const std::array<std::string, 6>& hardy_pair_labels() {
  static const std::array<std::string, 6> labels = {
      "alpha:-alpha_perp", "beta:-alpha",       "alpha_perp:-beta_perp",
      "beta:-beta_perp",   "beta:-alpha_perp",  "alpha:-beta_perp",
  };
  return labels;
}

std::pair<double, double> hardy_pair_angles(const HardyAngles& a, int index) {
  switch (index) {
    case kPairAlphaAlphaPerp:
      return {a.alpha, -a.alpha_perp};
    case kPairBetaAlpha:
      return {a.beta, -a.alpha};
    case kPairAlphaPerpBetaPerp:
      return {a.alpha_perp, -a.beta_perp};
    case kPairBetaBetaPerp:
      return {a.beta, -a.beta_perp};
    case kPairBetaAlphaPerp:
      return {a.beta, -a.alpha_perp};
    case kPairAlphaBetaPerp:
      return {a.alpha, -a.beta_perp};
    default:
      throw Error(ErrorKind::domain, "Hardy pair index out of range");
  }
}

InequalityResult hardy_inequality(const HardyCounts& counts) {
  double n1 = counts[kPairAlphaAlphaPerp];
  double n2 = counts[kPairBetaAlpha];
  double n3 = counts[kPairAlphaPerpBetaPerp];
  double n4 = counts[kPairBetaBetaPerp];
  InequalityResult out;
  out.lhs = n4 - n1 - n2 - n3;
  out.sigma = std::sqrt(n1 + n2 + n3 + n4);
  out.std_devs = out.sigma > 0.0 ? out.lhs / out.sigma : 0.0;
  return out;
}

namespace {

// ratio x/(x+y) with first-order Poisson propagation, numerator and
// denominator treated as independent.
ValueWithSigma poisson_ratio(double numerator, double denominator,
                             const char* what) {
  if (denominator <= 0.0) {
    throw Error(ErrorKind::domain,
                std::string(what) + ": zero denominator in conditional ratio");
  }
  double value = numerator / denominator;
  double rel2 = 0.0;
  if (numerator > 0.0) rel2 += 1.0 / numerator;
  rel2 += 1.0 / denominator;
  return ValueWithSigma{value, value * std::sqrt(rel2)};
}

}  // namespace

ConditionalInference conditional_inference(const HardyCounts& counts,
                                           const RatioOverride& p1_override,
                                           const RatioOverride& p2_override) {
  double n_ba = counts[kPairBetaAlpha];
  double n_bap = counts[kPairBetaAlphaPerp];
  double n_abp = counts[kPairAlphaBetaPerp];
  double n_apbp = counts[kPairAlphaPerpBetaPerp];
  double n_bbp = counts[kPairBetaBetaPerp];

  ConditionalInference out;
  out.p1_raw = poisson_ratio(n_bap, n_ba + n_bap, "p1");
  out.p2_raw = poisson_ratio(n_abp, n_abp + n_apbp, "p2");
  out.p1_used = p1_override.value_or(out.p1_raw);
  out.p2_used = p2_override.value_or(out.p2_raw);

  double expected = out.p1_used.value * out.p2_used.value * n_bbp;
  double rel2 = 0.0;
  if (out.p1_used.value > 0.0) {
    double r = out.p1_used.sigma / out.p1_used.value;
    rel2 += r * r;
  }
  if (out.p2_used.value > 0.0) {
    double r = out.p2_used.sigma / out.p2_used.value;
    rel2 += r * r;
  }
  if (n_bbp > 0.0) rel2 += 1.0 / n_bbp;
  out.expected = ValueWithSigma{expected, expected * std::sqrt(rel2)};

  out.observed = counts[kPairAlphaAlphaPerp];
  out.discrepancy_sigmas =
      out.expected.sigma > 0.0
          ? (out.expected.value - out.observed) / out.expected.sigma
          : 0.0;
  return out;
}

}  // namespace hardy
}  // namespace pairproj
