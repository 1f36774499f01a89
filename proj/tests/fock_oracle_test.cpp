#include <cmath>

#include "doctest.h"
#include "pairproj/error.hpp"
#include "pairproj/fock.hpp"
#include "pairproj/optics.hpp"
#include "test_support.hpp"

using namespace pairproj;
using namespace pairproj::fock;
using pairproj::optics::VppbsSettings;
namespace ts = test_support;

TEST_CASE("inject_state structure") {
  FockState hh = inject_state(tensor_state(state_h(), state_h()));
  CHECK(std::abs(hh.amplitude(kModeAH, kModeBH) - Complex(1.0, 0.0)) < 1e-15);
  CHECK(hh.squared_norm() == doctest::Approx(1.0));

  FockState s = inject_state(singlet_state());
  CHECK(s.amplitude(kModeAH, kModeBV).real() ==
        doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(s.amplitude(kModeAV, kModeBH).real() ==
        doctest::Approx(-1.0 / std::sqrt(2.0)));

  for (int i = 0; i < 50; ++i) {
    FockState f = inject_state(ts::random_state());
    CHECK(f.raw_terms().size() <= 4);
    CHECK(f.squared_norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("identity map leaves states unchanged") {
  FockState f = inject_state(ts::random_state());
  FockState g = apply_mode_map(f, ModeMap::identity(kStandardModeCount));
  for (const auto& [key, beta] : f.raw_terms()) {
    CHECK(std::abs(g.amplitude(key.first, key.second) -
                   f.amplitude(key.first, key.second)) < 1e-15);
  }
}

TEST_CASE("unmapped occupied mode raises config error") {
  FockState f = inject_state(ts::random_state());
  ModeMap broken = ModeMap::identity(kStandardModeCount);
  broken.rules[kModeAH].clear();
  CHECK_THROWS_AS(apply_mode_map(f, broken), Error);
}

TEST_CASE("Hong-Ou-Mandel bunching at the bare beam splitter") {
  // Two indistinguishable photons in the same polarization never exit from
  // different ports.
  FockState hh = inject_state(tensor_state(state_h(), state_h()));
  FockState out = apply_mode_map(hh, beam_splitter_map());
  CHECK(std::abs(out.amplitude(kModeAH, kModeBH)) < 1e-15);
  // They bunch with probability 1/2 per output port.
  CHECK(std::norm(out.amplitude(kModeAH, kModeAH)) == doctest::Approx(0.5));
  CHECK(std::norm(out.amplitude(kModeBH, kModeBH)) == doctest::Approx(0.5));
  CHECK(out.squared_norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("HOM symmetry law over a symmetric basis") {
  // Every symmetric polarization state anti-bunches nowhere.
  std::vector<Vector4c> symmetric;
  Vector4c hh = Vector4c::Zero();
  hh(kHH) = 1.0;
  symmetric.push_back(hh);
  Vector4c vv = Vector4c::Zero();
  vv(kVV) = 1.0;
  symmetric.push_back(vv);
  Vector4c triplet = Vector4c::Zero();
  triplet(kHV) = 1.0 / std::sqrt(2.0);
  triplet(kVH) = 1.0 / std::sqrt(2.0);
  symmetric.push_back(triplet);

  for (const auto& amps : symmetric) {
    FockState out = apply_mode_map(inject_state(TwoPhotonState(amps)),
                                   beam_splitter_map());
    CHECK(post_select_coincidence(out).probability < 1e-12);
  }

  // The antisymmetric singlet anti-bunches with probability 1 and stays the
  // singlet.
  FockState s =
      apply_mode_map(inject_state(singlet_state()), beam_splitter_map());
  PostSelection ps = post_select_coincidence(s);
  CHECK(ps.probability == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(state_fidelity(TwoPhotonState::normalized(ps.amplitudes),
                       singlet_state()) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("full train coefficients match the input-output relations") {
  VppbsSettings s{0.8, 0.6, 0.0};
  ModeMap train = build_full_train(s);
  Eigen::MatrixXcd m = train.matrix();
  double th = s.t_h, tv = s.t_v;
  double lh = std::sqrt(1.0 - th * th), lv = std::sqrt(1.0 - tv * tv);
  double r2 = std::sqrt(2.0);

  // a_H -> t_H(t_H a_H + i b_H + i l_H r2_H)/sqrt(2) + i l_H r1_H
  CHECK(std::abs(m(kModeAH, kModeAH) - Complex(th * th / r2, 0)) < 1e-14);
  CHECK(std::abs(m(kModeBH, kModeAH) - Complex(0, th / r2)) < 1e-14);
  CHECK(std::abs(m(kModeR2H, kModeAH) - Complex(0, th * lh / r2)) < 1e-14);
  CHECK(std::abs(m(kModeR1H, kModeAH) - Complex(0, lh)) < 1e-14);

  // b_H -> (b_H + i t_H a_H - l_H r2_H)/sqrt(2)
  CHECK(std::abs(m(kModeBH, kModeBH) - Complex(1.0 / r2, 0)) < 1e-14);
  CHECK(std::abs(m(kModeAH, kModeBH) - Complex(0, th / r2)) < 1e-14);
  CHECK(std::abs(m(kModeR2H, kModeBH) - Complex(-lh / r2, 0)) < 1e-14);

  // Lossless settings send nothing from the photon modes into loss modes.
  Eigen::MatrixXcd lossless = build_full_train(VppbsSettings{1, 1, 0}).matrix();
  for (int mode : {kModeR1H, kModeR1V, kModeR2H, kModeR2V}) {
    for (int c = 0; c < 4; ++c) {
      CHECK(std::abs(lossless(mode, c)) < 1e-15);
    }
  }
}

TEST_CASE("dilation unitarity: norm conserved with loss modes retained") {
  for (int i = 0; i < 100; ++i) {
    VppbsSettings s = ts::random_settings();
    TwoPhotonState in = ts::random_state();
    FockState out = apply_mode_map(inject_state(in), build_full_train(s));
    CHECK(out.squared_norm() == doctest::Approx(1.0).epsilon(1e-12));

    // Columns of the occupied input modes are unit norm.
    Eigen::MatrixXcd m = build_full_train(s).matrix();
    for (int c = 0; c < 4; ++c) {
      CHECK(m.col(c).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("post-selection of the evolved singlet at unit transmission") {
  ModeMap train = build_full_train(VppbsSettings{1.0, 1.0, 0.0});
  FockState out = apply_mode_map(inject_state(singlet_state()), train);
  PostSelection ps = post_select_coincidence(out);
  CHECK(ps.probability == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(state_fidelity(TwoPhotonState::normalized(ps.amplitudes),
                       singlet_state()) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // |H_a V_b> at unit transmission survives with probability 1/2.
  FockState hv = apply_mode_map(
      inject_state(tensor_state(state_h(), state_v())), train);
  CHECK(post_select_coincidence(hv).probability ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("destructive-train success probability equals POVM expectation") {
  for (int i = 0; i < 500; ++i) {
    VppbsSettings s = ts::random_settings();
    TwoPhotonState in = ts::random_state();
    FockState out =
        apply_mode_map(inject_state(in), build_destructive_train(s));
    double prob = post_select_coincidence(out).probability;
    double expect = expectation(optics::compose_projector(s).op, in);
    CHECK(prob == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("destructive train leaves the singlet behind") {
  for (int i = 0; i < 50; ++i) {
    VppbsSettings s = ts::random_settings();
    TwoPhotonState in = ts::random_state();
    PostSelection ps = post_select_coincidence(
        apply_mode_map(inject_state(in), build_destructive_train(s)));
    if (ps.probability > 1e-8) {
      CHECK(state_fidelity(TwoPhotonState::normalized(ps.amplitudes),
                           singlet_state()) >= 1.0 - 1e-10);
    }
  }
}

TEST_CASE("full-train success probability carries the second eta factor") {
  for (int i = 0; i < 100; ++i) {
    VppbsSettings s = ts::random_settings();
    TwoPhotonState in = ts::random_state();
    double full = post_select_coincidence(apply_mode_map(
                      inject_state(in), build_full_train(s)))
                      .probability;
    double destructive = post_select_coincidence(apply_mode_map(
                             inject_state(in), build_destructive_train(s)))
                             .probability;
    CHECK(full == doctest::Approx(s.eta() * destructive).epsilon(1e-10));
  }
}

TEST_CASE("oracle_povm at unit transmission is the singlet projector") {
  Matrix4c povm = oracle_povm(VppbsSettings{1.0, 1.0, 0.0}).matrix();
  CHECK(ts::max_abs_diff(povm, optics::singlet_projector().matrix()) < 1e-12);
}

TEST_CASE("oracle_povm matches the closed-form matrix pattern") {
  Matrix4c povm = oracle_povm(VppbsSettings{0.9, 0.5, 0.0}).matrix();
  CHECK(povm(kHV, kHV).real() == doctest::Approx(0.81 / 2.0).epsilon(1e-12));
  CHECK(povm(kVH, kVH).real() == doctest::Approx(0.25 / 2.0).epsilon(1e-12));
  CHECK(povm(kHV, kVH).real() == doctest::Approx(-0.45 / 2.0).epsilon(1e-12));
  CHECK(std::abs(povm(kHH, kHH)) < 1e-14);
}

TEST_CASE("oracle equivalence across random settings (property)") {
  for (int i = 0; i < 200; ++i) {
    VppbsSettings s = ts::random_settings();  // includes delta != 0
    Matrix4c oracle = oracle_povm(s).matrix();
    Matrix4c analytic = optics::compose_projector(s).op.matrix();
    CHECK(ts::max_abs_diff(oracle, analytic) < 1e-10);
  }
}

TEST_CASE("the full train's post-selected map is W |s><s| W") {
  // The two-VPPBS train acts, as an amplitude map, like W |s><s| W (both
  // passes multiply by W itself); at delta = 0 this equals the composed
  // operator eta |psi~><psi~|.
  for (int i = 0; i < 100; ++i) {
    VppbsSettings s = ts::random_settings();
    Matrix4c map = post_selected_map(build_full_train(s));
    Matrix4c w = optics::vppbs_operator(s);
    Matrix4c expected = w * optics::singlet_projector().matrix() * w;
    CHECK(ts::max_abs_diff(map, expected) < 1e-10);
  }
  for (int i = 0; i < 50; ++i) {
    VppbsSettings s = ts::random_settings(false);  // delta = 0
    Matrix4c map = post_selected_map(build_full_train(s));
    Matrix4c analytic = optics::compose_projector(s).op.matrix();
    CHECK(ts::max_abs_diff(map, analytic) < 1e-10);
  }
}

TEST_CASE("distinguishable photons: closed form W^2/2 for the POVM") {
  // For fully distinguishable photons the destructive train's coincidence
  // probability is <phi| diag(T_H, T_H, T_V, T_V)/2 |phi>.
  for (int i = 0; i < 100; ++i) {
    VppbsSettings s = ts::random_settings(false);
    TwoPhotonState in = ts::random_state();
    double prob = distinguishable_coincidence_probability(in, s);
    Matrix4c dist = Matrix4c::Zero();
    dist(kHH, kHH) = s.t_h * s.t_h / 2.0;
    dist(kHV, kHV) = s.t_h * s.t_h / 2.0;
    dist(kVH, kVH) = s.t_v * s.t_v / 2.0;
    dist(kVV, kVV) = s.t_v * s.t_v / 2.0;
    double expect = expectation(PolarizationOperator(dist), in);
    CHECK(prob == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("distinguishable HH photons coincide half the time at t = 1") {
  double p = distinguishable_coincidence_probability(
      tensor_state(state_h(), state_h()), VppbsSettings{1.0, 1.0, 0.0});
  CHECK(p == doctest::Approx(0.5).epsilon(1e-12));
}
