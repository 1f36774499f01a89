#include "pairproj/fock.hpp"

#include <cmath>

#include "pairproj/error.hpp"

namespace pairproj {
namespace fock {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kPruneTol = 0.0;  // keep exact zeros out of the term map

void check_mode(int mode, int count) {
  if (mode < 0 || mode >= count) {
    throw Error(ErrorKind::config, "mode index out of range");
  }
}

}  // namespace

FockState::FockState(int mode_count) : mode_count_(mode_count) {}

void FockState::add_product(int i, int j, const Complex& beta) {
  check_mode(i, mode_count_);
  check_mode(j, mode_count_);
  auto key = std::minmax(i, j);
  Complex& slot = terms_[key];
  slot += beta;
  if (std::abs(slot) <= kPruneTol) {
    terms_.erase(key);
  }
}

Complex FockState::amplitude(int i, int j) const {
  auto it = terms_.find(std::minmax(i, j));
  if (it == terms_.end()) return Complex(0.0, 0.0);
  return (i == j) ? it->second * kSqrt2 : it->second;
}

double FockState::squared_norm() const {
  double total = 0.0;
  for (const auto& [key, beta] : terms_) {
    double weight = (key.first == key.second) ? 2.0 : 1.0;
    total += weight * std::norm(beta);
  }
  return total;
}

ModeMap ModeMap::identity(int mode_count) {
  ModeMap map;
  map.mode_count = mode_count;
  map.rules.resize(mode_count);
  for (int i = 0; i < mode_count; ++i) {
    map.rules[i] = {{i, Complex(1.0, 0.0)}};
  }
  return map;
}

ModeMap ModeMap::then(const ModeMap& next) const {
  if (next.mode_count != mode_count) {
    throw Error(ErrorKind::config, "cannot compose maps over different modes");
  }
  ModeMap out;
  out.mode_count = mode_count;
  out.rules.resize(mode_count);
  for (int i = 0; i < mode_count; ++i) {
    std::map<int, Complex> acc;
    for (const auto& [mid, c] : rules[i]) {
      for (const auto& [fin, d] : next.rules[mid]) {
        acc[fin] += c * d;
      }
    }
    for (const auto& [fin, c] : acc) {
      if (c != Complex(0.0, 0.0)) {
        out.rules[i].push_back({fin, c});
      }
    }
  }
  return out;
}

Eigen::MatrixXcd ModeMap::matrix() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(mode_count, mode_count);
  for (int i = 0; i < mode_count; ++i) {
    for (const auto& [out, c] : rules[i]) {
      m(out, i) += c;
    }
  }
  return m;
}

FockState inject_state(const TwoPhotonState& state) {
  FockState out(kStandardModeCount);
  out.add_product(kModeAH, kModeBH, state.amp(kHH));
  out.add_product(kModeAH, kModeBV, state.amp(kHV));
  out.add_product(kModeAV, kModeBH, state.amp(kVH));
  out.add_product(kModeAV, kModeBV, state.amp(kVV));
  return out;
}

FockState apply_mode_map(const FockState& state, const ModeMap& map) {
  if (map.mode_count != state.mode_count()) {
    throw Error(ErrorKind::config, "mode map size does not match state");
  }
  FockState out(state.mode_count());
  for (const auto& [key, beta] : state.raw_terms()) {
    auto [i, j] = key;
    if (std::abs(beta) == 0.0) continue;
    if (map.rules[i].empty() || map.rules[j].empty()) {
      throw Error(ErrorKind::config,
                  "occupied mode " + std::to_string(map.rules[i].empty() ? i : j) +
                      " has no substitution rule");
    }
    for (const auto& [k, ci] : map.rules[i]) {
      for (const auto& [l, cj] : map.rules[j]) {
        out.add_product(k, l, beta * ci * cj);
      }
    }
  }
  return out;
}

ModeMap beam_splitter_map() {
  const Complex half(1.0 / kSqrt2, 0.0);
  const Complex ihalf(0.0, 1.0 / kSqrt2);
  ModeMap map = ModeMap::identity(kStandardModeCount);
  map.rules[kModeAH] = {{kModeAH, half}, {kModeBH, ihalf}};
  map.rules[kModeAV] = {{kModeAV, half}, {kModeBV, ihalf}};
  map.rules[kModeBH] = {{kModeBH, half}, {kModeAH, ihalf}};
  map.rules[kModeBV] = {{kModeBV, half}, {kModeAV, ihalf}};
  return map;
}

ModeMap vppbs_map(const optics::VppbsSettings& settings, int reflected_bank) {
  settings.validate();
  if (reflected_bank != 1 && reflected_bank != 2) {
    throw Error(ErrorKind::config, "reflected bank must be 1 or 2");
  }
  int r_h = (reflected_bank == 1) ? kModeR1H : kModeR2H;
  int r_v = (reflected_bank == 1) ? kModeR1V : kModeR2V;

  Complex th(settings.t_h, 0.0);
  Complex tv = settings.t_v * std::exp(Complex(0.0, settings.delta));
  double loss_h = std::sqrt(std::max(0.0, 1.0 - std::norm(th)));
  double loss_v = std::sqrt(std::max(0.0, 1.0 - std::norm(tv)));

  ModeMap map = ModeMap::identity(kStandardModeCount);
  map.rules[kModeAH] = {{kModeAH, th}, {r_h, Complex(0.0, loss_h)}};
  map.rules[kModeAV] = {{kModeAV, tv}, {r_v, Complex(0.0, loss_v)}};
  return map;
}

ModeMap build_full_train(const optics::VppbsSettings& settings) {
  return vppbs_map(settings, 1).then(beam_splitter_map()).then(
      vppbs_map(settings, 2));
}

ModeMap build_destructive_train(const optics::VppbsSettings& settings) {
  return vppbs_map(settings, 1).then(beam_splitter_map());
}

PostSelection post_select_coincidence(const FockState& state) {
  PostSelection out;
  out.amplitudes(kHH) = state.amplitude(kModeAH, kModeBH);
  out.amplitudes(kHV) = state.amplitude(kModeAH, kModeBV);
  out.amplitudes(kVH) = state.amplitude(kModeAV, kModeBH);
  out.amplitudes(kVV) = state.amplitude(kModeAV, kModeBV);
  out.probability = out.amplitudes.squaredNorm();
  return out;
}

namespace {

Vector4c run_train(const ModeMap& train, const Vector4c& input) {
  FockState in = inject_state(TwoPhotonState::normalized(input));
  // Undo the normalization so the probe matrix stays exactly linear.
  double scale = input.norm();
  FockState evolved = apply_mode_map(in, train);
  return post_select_coincidence(evolved).amplitudes * scale;
}

}  // namespace

Matrix4c post_selected_map(const ModeMap& train) {
  // Probe inputs: the four basis states and the twelve pairwise
  // superpositions (e_j + e_k)/sqrt(2), (e_j + i e_k)/sqrt(2).
  std::vector<Vector4c> probes;
  for (int j = 0; j < 4; ++j) {
    Vector4c e = Vector4c::Zero();
    e(j) = 1.0;
    probes.push_back(e);
  }
  for (int j = 0; j < 4; ++j) {
    for (int k = j + 1; k < 4; ++k) {
      Vector4c p = Vector4c::Zero();
      p(j) = 1.0 / kSqrt2;
      p(k) = 1.0 / kSqrt2;
      probes.push_back(p);
      Vector4c q = Vector4c::Zero();
      q(j) = 1.0 / kSqrt2;
      q(k) = Complex(0.0, 1.0 / kSqrt2);
      probes.push_back(q);
    }
  }

  Eigen::MatrixXcd x(4, probes.size());
  Eigen::MatrixXcd v(4, probes.size());
  for (size_t i = 0; i < probes.size(); ++i) {
    x.col(i) = probes[i];
    v.col(i) = run_train(train, probes[i]);
  }
  // Least-squares inversion, exact because the map is linear and the basis
  // probes span the space.
  Eigen::MatrixXcd m =
      (x * x.adjoint()).ldlt().solve(x * v.adjoint()).adjoint();
  return Matrix4c(m);
}

PolarizationOperator oracle_povm(const optics::VppbsSettings& settings) {
  Matrix4c m = post_selected_map(build_destructive_train(settings));
  Matrix4c povm = m.adjoint() * m;
  return PolarizationOperator(Matrix4c((povm + povm.adjoint()) / 2.0));
}

double distinguishable_coincidence_probability(
    const TwoPhotonState& input, const optics::VppbsSettings& settings) {
  // Double the registry: modes [0,8) carry the a-photon's temporal mode,
  // modes [8,16) the orthogonal temporal mode carrying the b photon.
  const int n = 2 * kStandardModeCount;
  ModeMap train = build_destructive_train(settings);
  ModeMap doubled;
  doubled.mode_count = n;
  doubled.rules.resize(n);
  for (int i = 0; i < kStandardModeCount; ++i) {
    doubled.rules[i] = train.rules[i];
    for (const auto& [out, c] : train.rules[i]) {
      doubled.rules[i + kStandardModeCount].push_back(
          {out + kStandardModeCount, c});
    }
  }

  FockState in(n);
  in.add_product(kModeAH, kModeBH + kStandardModeCount, input.amp(kHH));
  in.add_product(kModeAH, kModeBV + kStandardModeCount, input.amp(kHV));
  in.add_product(kModeAV, kModeBH + kStandardModeCount, input.amp(kVH));
  in.add_product(kModeAV, kModeBV + kStandardModeCount, input.amp(kVV));

  FockState evolved = apply_mode_map(in, doubled);

  // Coincidence: one photon in spatial mode a, one in spatial mode b,
  // regardless of temporal label.
  const int spatial_a[4] = {kModeAH, kModeAV, kModeAH + kStandardModeCount,
                            kModeAV + kStandardModeCount};
  const int spatial_b[4] = {kModeBH, kModeBV, kModeBH + kStandardModeCount,
                            kModeBV + kStandardModeCount};
  double prob = 0.0;
  for (int ia : spatial_a) {
    for (int ib : spatial_b) {
      prob += std::norm(evolved.amplitude(ia, ib));
    }
  }
  return prob;
}

}  // namespace fock
}  // namespace pairproj
