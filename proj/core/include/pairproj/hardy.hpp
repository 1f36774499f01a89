#pragma once

#include <array>
#include <optional>
#include <string>

#include "pairproj/types.hpp"

namespace pairproj {
namespace hardy {

/// Analyzer angles for Hardy's test, generated from the splitting ratio:
/// tan(alpha) = [(1+gamma)/(1-gamma)]^{1/4},
/// tan(beta)  = -[(1+gamma)/(1-gamma)]^{3/4}.
/// The signed form keeps the three Hardy zeros exact for gamma < 0 as well
/// (swapping the photons maps gamma -> -gamma and exchanges the analyzers).
struct HardyAngles {
  double alpha;
  double beta;
  double alpha_perp;  // alpha + pi/2
  double beta_perp;   // beta + pi/2
};

/// Throws Error(domain) unless |gamma| < 1.
HardyAngles hardy_angles(double gamma);

/// P(theta1, theta2) =
///   eta |sqrt(1+gamma) cos(theta1) sin(theta2)
///        - sqrt(1-gamma) sin(theta1) cos(theta2)|^2 / 2.
double joint_probability(double theta1, double theta2, double gamma,
                         double eta);

/// Index order of the six analyzer pairs, matching the measured-counts table:
/// (alpha,-alpha_perp), (beta,-alpha), (alpha_perp,-beta_perp),
/// (beta,-beta_perp), (beta,-alpha_perp), (alpha,-beta_perp).
enum HardyPairIndex : int {
  kPairAlphaAlphaPerp = 0,
  kPairBetaAlpha = 1,
  kPairAlphaPerpBetaPerp = 2,
  kPairBetaBetaPerp = 3,
  kPairBetaAlphaPerp = 4,
  kPairAlphaBetaPerp = 5,
};

/// Canonical ASCII labels of the six pairs, in index order.
const std::array<std::string, 6>& hardy_pair_labels();

/// The (theta1, theta2) analyzer settings of pair `index`.
std::pair<double, double> hardy_pair_angles(const HardyAngles& angles,
                                            int index);

/// Six coincidence counts plus the acquisition duration.
struct HardyCounts {
  std::array<double, 6> counts{};  // indexed by HardyPairIndex
  double duration = 1.0;

  double operator[](int index) const { return counts[index]; }
};

struct InequalityResult {
  double lhs;       // N(b,-b') - N(a,-a') - N(b,-a) - N(a',-b')
  double sigma;     // sqrt of the summed counts (independent Poisson)
  double std_devs;  // lhs / sigma
};

/// The count inequality N(beta,-beta_perp) - N(alpha,-alpha_perp)
/// - N(beta,-alpha) - N(alpha_perp,-beta_perp) > 0 with Poisson error.
InequalityResult hardy_inequality(const HardyCounts& counts);

/// A value with a one-sigma uncertainty.
struct ValueWithSigma {
  double value;
  double sigma;
};

/// Optional replacement for a conditional probability (e.g. a published
/// value), carrying its quoted uncertainty.
using RatioOverride = std::optional<ValueWithSigma>;

struct ConditionalInference {
  ValueWithSigma p1_raw;    // N(b,-a') / (N(b,-a) + N(b,-a')) from counts
  ValueWithSigma p2_raw;    // N(a,-b') / (N(a,-b') + N(a',-b')) from counts
  ValueWithSigma p1_used;   // override if provided, else raw
  ValueWithSigma p2_used;
  ValueWithSigma expected;  // p1_used * p2_used * N(b,-b')
  double observed;          // N(a,-a')
  double discrepancy_sigmas;  // (expected - observed) / sigma_expected
};

/// The conditional-probability inference: what coincidence count at
/// (alpha,-alpha_perp) would the two conditional probabilities predict, and
/// by how many sigma does the observation miss it. Ratio uncertainties use
/// first-order propagation treating numerator and denominator as independent
/// Poisson variables. Throws Error(domain) on a zero denominator.
ConditionalInference conditional_inference(const HardyCounts& counts,
                                           const RatioOverride& p1_override = {},
                                           const RatioOverride& p2_override = {});

}  // namespace hardy
}  // namespace pairproj
