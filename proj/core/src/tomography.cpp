#include "pairproj/tomography.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "pairproj/entanglement.hpp"
#include "pairproj/error.hpp"
#include "pairproj/random.hpp"

namespace pairproj {
namespace tomo {

namespace {

SingleQubitState probe_single(char label) {
  switch (label) {
    case 'H':
      return state_h();
    case 'V':
      return state_v();
    case 'D':
      return state_d();
    case 'R':
      return state_r();
    default:
      throw Error(ErrorKind::validation, "unknown probe letter");
  }
}

}  // namespace

std::vector<Probe> probe_states() {
  static const char letters[4] = {'H', 'V', 'D', 'R'};
  std::vector<Probe> probes;
  probes.reserve(16);
  for (char b : letters) {
    for (char a : letters) {
      probes.push_back(Probe{std::string{a, b},
                             tensor_state(probe_single(a), probe_single(b))});
    }
  }
  return probes;
}

std::vector<double> predicted_probabilities(const PolarizationOperator& op,
                                            const std::vector<Probe>& probes) {
  std::vector<double> out;
  out.reserve(probes.size());
  for (const auto& probe : probes) {
    out.push_back(expectation(op, probe.state));
  }
  return out;
}

std::vector<CountRecord> simulate_counts(const PolarizationOperator& op,
                                         const std::vector<Probe>& probes,
                                         double rate_scale, double duration,
                                         std::uint64_t seed) {
  if (!(rate_scale > 0.0) || !(duration > 0.0)) {
    throw Error(ErrorKind::validation,
                "rate_scale and duration must be positive");
  }
  std::vector<double> probs = predicted_probabilities(op, probes);
  Rng rng(seed);
  std::vector<CountRecord> records;
  records.reserve(probes.size());
  double calibration = rate_scale * duration;
  for (size_t k = 0; k < probes.size(); ++k) {
    CountRecord rec;
    rec.label = probes[k].label;
    rec.counts =
        static_cast<double>(rng.poisson(calibration * std::max(0.0, probs[k])));
    rec.duration = duration;
    rec.rate_scale = calibration;
    records.push_back(rec);
  }
  return records;
}

namespace {

// The 16 real parameters of the lower-triangular factor T: four real
// diagonal entries followed by real/imaginary pairs of the strictly lower
// entries.
struct ParamSlot {
  int row;
  int col;
  Complex unit;
};

const std::array<ParamSlot, 16>& param_slots() {
  static const std::array<ParamSlot, 16> slots = {{
      {0, 0, {1, 0}},
      {1, 1, {1, 0}},
      {2, 2, {1, 0}},
      {3, 3, {1, 0}},
      {1, 0, {1, 0}},
      {1, 0, {0, 1}},
      {2, 0, {1, 0}},
      {2, 0, {0, 1}},
      {2, 1, {1, 0}},
      {2, 1, {0, 1}},
      {3, 0, {1, 0}},
      {3, 0, {0, 1}},
      {3, 1, {1, 0}},
      {3, 1, {0, 1}},
      {3, 2, {1, 0}},
      {3, 2, {0, 1}},
  }};
  return slots;
}

Matrix4c factor_from_params(const Eigen::Matrix<double, 16, 1>& theta) {
  Matrix4c t = Matrix4c::Zero();
  const auto& slots = param_slots();
  for (int m = 0; m < 16; ++m) {
    t(slots[m].row, slots[m].col) += theta(m) * slots[m].unit;
  }
  return t;
}

struct Likelihood {
  double value = 0.0;
  Eigen::Matrix<double, 16, 1> gradient;
  Eigen::Matrix<double, 16, 16> hessian;
};

// Poisson log-likelihood relative to the saturated model (mu_k = n_k), i.e.
// sum_k [n_k log(mu_k/n_k) - (mu_k - n_k)] = -deviance/2, with analytic
// gradient and Hessian in the 16 factor parameters. The shift does not move
// the optimum; it keeps the value O(residual) near it, so the line search
// can resolve changes far below the absolute likelihood's rounding floor.
Likelihood evaluate_likelihood(const Eigen::Matrix<double, 16, 1>& theta,
                               const std::vector<Vector4c>& probe_vectors,
                               const std::vector<double>& counts,
                               const std::vector<double>& scales,
                               bool want_derivatives) {
  const auto& slots = param_slots();
  Matrix4c t = factor_from_params(theta);

  Likelihood out;
  out.gradient.setZero();
  out.hessian.setZero();

  for (size_t k = 0; k < probe_vectors.size(); ++k) {
    const Vector4c& phi = probe_vectors[k];
    Vector4c w = t * phi;
    double p = w.squaredNorm();
    double mu = scales[k] * p;
    double n = counts[k];

    if (n > 0.0) {
      if (mu <= 0.0) {
        out.value = -std::numeric_limits<double>::infinity();
        return out;
      }
      out.value += n * std::log1p((mu - n) / n) - (mu - n);
    } else {
      out.value -= mu;
    }

    if (!want_derivatives) continue;

    // residual r = n/mu - 1 (the -1 survives when n = mu = 0).
    double r = (mu > 0.0) ? (n / mu - 1.0) : -1.0;
    double curvature = (mu > 0.0) ? (n / (mu * mu)) : 0.0;

    // z_m = unit_m * phi[col_m]; dp/dtheta_m = 2 Re(conj(w[row_m]) z_m).
    std::array<Complex, 16> z;
    std::array<double, 16> dp;
    for (int m = 0; m < 16; ++m) {
      z[m] = slots[m].unit * phi(slots[m].col);
      dp[m] = 2.0 * (std::conj(w(slots[m].row)) * z[m]).real();
    }
    double s = scales[k];
    for (int m = 0; m < 16; ++m) {
      out.gradient(m) += r * s * dp[m];
      for (int m2 = 0; m2 <= m; ++m2) {
        double h = -curvature * s * s * dp[m] * dp[m2];
        if (slots[m].row == slots[m2].row) {
          h += r * s * 2.0 * (std::conj(z[m2]) * z[m]).real();
        }
        out.hessian(m, m2) += h;
      }
    }
  }
  if (want_derivatives) {
    out.hessian = out.hessian.selfadjointView<Eigen::Lower>();
  }
  return out;
}

}  // namespace

ReconstructionResult reconstruct(const std::vector<CountRecord>& records,
                                 const std::vector<Probe>& probes,
                                 const ReconstructionOptions& options) {
  if (records.size() != probes.size() || records.size() < 16) {
    throw Error(ErrorKind::schema,
                "need one count record per probe (16 or more)");
  }
  std::vector<Vector4c> probe_vectors;
  std::vector<double> counts;
  std::vector<double> scales;
  double total_counts = 0.0;
  double total_scale = 0.0;
  for (size_t k = 0; k < records.size(); ++k) {
    if (records[k].label != probes[k].label) {
      throw Error(ErrorKind::schema, "count record '" + records[k].label +
                                         "' does not match probe '" +
                                         probes[k].label + "'");
    }
    if (records[k].counts < 0.0 || !(records[k].rate_scale > 0.0)) {
      throw Error(ErrorKind::validation,
                  "counts must be >= 0 and rate_scale > 0");
    }
    probe_vectors.push_back(probes[k].state.amplitudes());
    counts.push_back(records[k].counts);
    scales.push_back(records[k].rate_scale);
    total_counts += records[k].counts;
    total_scale += records[k].rate_scale;
  }

  ReconstructionResult result{PolarizationOperator(Matrix4c::Zero()), 0.0, 0,
                              false, false, 1.0, {}};

  if (total_counts <= 0.0) {
    result.all_counts_zero = true;
    result.converged = true;
    return result;
  }

  // Start from Pi = I/4 scaled to match the total counts: alpha * I with
  // alpha chosen so sum(mu_k) = sum(n_k).
  double alpha = total_counts / total_scale;
  Eigen::Matrix<double, 16, 1> theta;
  theta.setZero();
  for (int m = 0; m < 4; ++m) theta(m) = std::sqrt(alpha);

  double rate_multiplier = 1.0;
  std::vector<double> working_scales = scales;

  auto apply_rate_fit = [&]() {
    if (!options.fit_rate_scale) return;
    // Closed-form optimum of a global rate multiplier c:
    // c* = sum(n) / sum(s p).
    Matrix4c t = factor_from_params(theta);
    double predicted = 0.0;
    for (size_t k = 0; k < probe_vectors.size(); ++k) {
      predicted += scales[k] * (t * probe_vectors[k]).squaredNorm();
    }
    if (predicted > 0.0) {
      rate_multiplier = total_counts / predicted;
      for (size_t k = 0; k < scales.size(); ++k) {
        working_scales[k] = scales[k] * rate_multiplier;
      }
    }
  };

  apply_rate_fit();
  Likelihood current = evaluate_likelihood(theta, probe_vectors, counts,
                                           working_scales, true);
  result.ll_history.push_back(current.value);

  double lambda = 1e-6;
  bool converged = false;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    double grad_norm = current.gradient.norm();
    if (grad_norm < options.gradient_tol) {
      converged = true;
      break;
    }

    // Damped Newton ascent: solve (-H + lambda I) step = gradient.
    bool accepted = false;
    double ll_before = current.value;
    for (int attempt = 0; attempt < 60; ++attempt) {
      Eigen::Matrix<double, 16, 16> a = -current.hessian;
      double diag_scale = std::max(1.0, a.diagonal().cwiseAbs().maxCoeff());
      a.diagonal().array() += lambda * diag_scale;
      Eigen::LDLT<Eigen::Matrix<double, 16, 16>> ldlt(a);
      Eigen::Matrix<double, 16, 1> step = ldlt.solve(current.gradient);
      if (!step.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      Eigen::Matrix<double, 16, 1> trial = theta + step;
      Likelihood cand = evaluate_likelihood(trial, probe_vectors, counts,
                                            working_scales, false);
      if (std::isfinite(cand.value) && cand.value >= current.value) {
        theta = trial;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) {
      // No uphill step within the damping budget; flat to rounding noise.
      converged = current.gradient.norm() < options.gradient_tol * 1e3;
      break;
    }

    apply_rate_fit();
    current = evaluate_likelihood(theta, probe_vectors, counts, working_scales,
                                  true);
    result.ll_history.push_back(current.value);

    double rel_change = std::abs(current.value - ll_before) /
                        (1.0 + std::abs(current.value));
    if (options.rel_ll_tol > 0.0 && rel_change < options.rel_ll_tol) {
      converged = true;
      ++iter;
      break;
    }
  }

  Matrix4c t = factor_from_params(theta);
  Matrix4c pi = t.adjoint() * t;
  result.op = PolarizationOperator(Matrix4c((pi + pi.adjoint()) / 2.0));
  result.log_likelihood = current.value;
  result.iterations = iter;
  result.converged = converged;
  result.fitted_rate_multiplier = rate_multiplier;
  return result;
}

Matrix4c linear_inversion(const std::vector<double>& probabilities,
                          const std::vector<Probe>& probes) {
  if (probabilities.size() != probes.size()) {
    throw Error(ErrorKind::schema, "probability/probe count mismatch");
  }
  // Hermitian basis: E_ii, (E_ij + E_ji), i(E_ij - E_ji).
  std::vector<Matrix4c> basis;
  for (int i = 0; i < 4; ++i) {
    Matrix4c b = Matrix4c::Zero();
    b(i, i) = 1.0;
    basis.push_back(b);
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      Matrix4c b = Matrix4c::Zero();
      b(i, j) = 1.0;
      b(j, i) = 1.0;
      basis.push_back(b);
      Matrix4c c = Matrix4c::Zero();
      c(i, j) = Complex(0.0, 1.0);
      c(j, i) = Complex(0.0, -1.0);
      basis.push_back(c);
    }
  }

  Eigen::MatrixXd a(probes.size(), 16);
  Eigen::VectorXd p(probes.size());
  for (size_t k = 0; k < probes.size(); ++k) {
    const Vector4c& phi = probes[k].state.amplitudes();
    for (int m = 0; m < 16; ++m) {
      a(k, m) = phi.dot(basis[m] * phi).real();
    }
    p(k) = probabilities[k];
  }
  Eigen::VectorXd x = a.colPivHouseholderQr().solve(p);
  Matrix4c pi = Matrix4c::Zero();
  for (int m = 0; m < 16; ++m) {
    pi += x(m) * basis[m];
  }
  return pi;
}

std::vector<SweepPoint> sweep_reconstruction(
    const std::vector<double>& big_t_h_values, const SweepOptions& options) {
  if (!(options.t_v_fixed >= 0.0 && options.t_v_fixed <= 1.0)) {
    throw Error(ErrorKind::validation, "t_v_fixed must lie in [0, 1]");
  }
  std::vector<Probe> probes = probe_states();
  std::vector<SweepPoint> out;
  out.reserve(big_t_h_values.size());

  ReconstructionOptions rec_options;
  if (!options.noise) {
    // Exact expected counts: polish until the flat factor directions settle,
    // so elements reach 1e-10. Convergence by gradient alone.
    rec_options.gradient_tol = 1e-13;
    rec_options.rel_ll_tol = 0.0;
    rec_options.max_iterations = 2000;
  }

  for (size_t i = 0; i < big_t_h_values.size(); ++i) {
    double big_t_h = big_t_h_values[i];
    optics::VppbsSettings settings = optics::VppbsSettings::from_transmissions(
        big_t_h, options.t_v_fixed, 0.0);
    optics::ComposedProjector ideal = optics::compose_projector(settings);

    PolarizationOperator measured =
        options.noise ? expsim::noisy_povm(settings, *options.noise)
                      : ideal.op;

    std::vector<CountRecord> records;
    double calibration = options.rate_scale * options.duration;
    if (options.noise) {
      Rng rng(derive_seed(options.seed, i));
      for (const auto& probe : probes) {
        CountRecord rec;
        rec.label = probe.label;
        double mean = expsim::expected_counts(measured, probe.state,
                                              *options.noise,
                                              calibration, options.duration);
        rec.counts = static_cast<double>(rng.poisson(mean));
        rec.duration = options.duration;
        rec.rate_scale = calibration;
        records.push_back(rec);
      }
    } else {
      for (const auto& probe : probes) {
        CountRecord rec;
        rec.label = probe.label;
        rec.counts = calibration * expectation(measured, probe.state);
        rec.duration = options.duration;
        rec.rate_scale = calibration;
        records.push_back(rec);
      }
    }

    ReconstructionResult rec = reconstruct(records, probes, rec_options);

    SweepPoint point;
    point.big_t_h = big_t_h;
    point.gamma = settings.gamma();
    point.eta = ideal.eta;
    double tr = rec.op.trace();
    point.normalized_op =
        tr > 0.0 ? Matrix4c(rec.op.matrix() / tr) : rec.op.matrix();
    point.elem_hvhv = point.normalized_op(kHV, kHV).real();
    point.elem_vhvh = point.normalized_op(kVH, kVH).real();
    point.elem_hvvh = point.normalized_op(kHV, kVH);
    point.neg_abs_hvvh = -std::abs(point.elem_hvvh);
    double max_off = 0.0;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        bool sector = (r == kHV || r == kVH) && (c == kHV || c == kVH);
        if (!sector) {
          max_off = std::max(max_off, std::abs(point.normalized_op(r, c)));
        }
      }
    }
    point.max_offsector = max_off;
    point.fidelity = operator_fidelity(rec.op, ideal.op);
    point.concurrence = concurrence_mixed(rec.op);
    point.converged = rec.converged;
    out.push_back(point);
  }
  return out;
}

}  // namespace tomo
}  // namespace pairproj
