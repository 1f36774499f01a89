// pairproj: simulate, synthesize, and analyze two-photon polarization
// projectors built from variable polarization-dependent loss and two-photon
// interference.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pairproj/entanglement.hpp"
#include "pairproj/error.hpp"
#include "pairproj/expsim.hpp"
#include "pairproj/fock.hpp"
#include "pairproj/hardy.hpp"
#include "pairproj/io.hpp"
#include "pairproj/jones.hpp"
#include "pairproj/optics.hpp"
#include "pairproj/random.hpp"
#include "pairproj/tomography.hpp"

using nlohmann::json;
using namespace pairproj;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitConvergence = 3;

// Buffered output: nothing is written until the command fully succeeds.
void deliver(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::validation, "cannot open '" + out_path + "'");
  }
  out << text;
}

// Output format tags. Reports accept json (indented) or json-compact; tables
// only csv.
std::string render_report(const json& report, const std::string& format) {
  if (format == "json" || format.empty()) return report.dump(2) + "\n";
  if (format == "json-compact") return report.dump() + "\n";
  throw Error(ErrorKind::validation,
              "format '" + format + "' not valid for a report (json, "
              "json-compact)");
}

void require_table_format(const std::string& format) {
  if (!format.empty() && format != "csv") {
    throw Error(ErrorKind::validation,
                "format '" + format + "' not valid for a table (csv)");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::validation, "cannot read '" + path + "'");
  }
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

TwoPhotonState named_state(const std::string& name) {
  if (name == "singlet" || name == "psi-minus") return singlet_state();
  if (name == "psi-plus") {
    Vector4c v = Vector4c::Zero();
    v(kHV) = v(kVH) = 1.0 / std::sqrt(2.0);
    return TwoPhotonState(v);
  }
  if (name == "phi-plus" || name == "phi-minus") {
    Vector4c v = Vector4c::Zero();
    v(kHH) = 1.0 / std::sqrt(2.0);
    v(kVV) = (name == "phi-plus" ? 1.0 : -1.0) / std::sqrt(2.0);
    return TwoPhotonState(v);
  }
  if (name.size() == 2) {
    auto qubit = [](char c) -> SingleQubitState {
      switch (c) {
        case 'H': return state_h();
        case 'V': return state_v();
        case 'D': return state_d();
        case 'A': return state_a();
        case 'R': return state_r();
        case 'L': return state_l();
        default:
          throw Error(ErrorKind::parse,
                      std::string("unknown polarization letter '") + c + "'");
      }
    };
    return tensor_state(qubit(name[0]), qubit(name[1]));
  }
  throw Error(ErrorKind::parse, "unknown state name '" + name + "'");
}

json matrix_to_json(const Matrix4c& m) {
  json rows = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int j = 0; j < 4; ++j) {
      row.push_back(io::format_complex(m(i, j)));
    }
    rows.push_back(row);
  }
  return rows;
}

json matrix_to_json(const Matrix2c& m) {
  json rows = json::array();
  for (int i = 0; i < 2; ++i) {
    json row = json::array();
    for (int j = 0; j < 2; ++j) {
      row.push_back(io::format_complex(m(i, j)));
    }
    rows.push_back(row);
  }
  return rows;
}

json amplitudes_to_json(const Vector4c& v) {
  json out = json::array();
  for (int i = 0; i < 4; ++i) out.push_back(io::format_complex(v(i)));
  return out;
}

double rad_to_deg(double rad) { return rad * 180.0 / M_PI; }

json angle_to_json(double rad) {
  return json{{"rad", rad}, {"deg", rad_to_deg(rad)}};
}

json unitary_to_json(const SingleQubitUnitary& u) {
  WavePlateDecomposition d = decompose_unitary(u);
  json plates{
      {"qwp", angle_to_json(d.qwp_angle)},
      {"hwp", angle_to_json(d.hwp_angle)},
      {"residual_phase", angle_to_json(d.residual_phase)},
      {"needs_phase_plate", d.needs_phase_plate},
  };
  return json{{"matrix", matrix_to_json(u.matrix())}, {"waveplates", plates}};
}

struct NoiseFlags {
  double hom_vis = 0.90;
  double vppbs_vis = 0.93;
  double dark_rate = 0.0;
  bool ideal = false;

  std::optional<expsim::NoiseModel> model() const {
    if (ideal) return std::nullopt;
    expsim::NoiseModel m = expsim::nominal_noise_model();
    m.hom_visibility = hom_vis;
    m.vppbs_visibility = vppbs_vis;
    m.dark_rate = dark_rate;
    return m;
  }
};

void add_noise_flags(CLI::App* cmd, NoiseFlags& flags) {
  cmd->add_option("--noise-hom-vis", flags.hom_vis,
                  "two-photon interference visibility")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--noise-vppbs-vis", flags.vppbs_vis,
                  "interferometer visibility (sets transmission ranges)")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--dark-rate", flags.dark_rate,
                  "background coincidences per second")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--ideal", flags.ideal, "disable all imperfections");
}

// ---------------------------------------------------------------------------

int cmd_synthesize(const std::string& target_name,
                   const std::string& amplitudes,
                   const std::string& amplitudes_file, const std::string& out,
                   const std::string& format) {
  std::string amp_text = amplitudes;
  if (!amplitudes_file.empty()) {
    amp_text = read_file(amplitudes_file);
    while (!amp_text.empty() &&
           (amp_text.back() == '\n' || amp_text.back() == '\r')) {
      amp_text.pop_back();
    }
  }
  TwoPhotonState target =
      amp_text.empty()
          ? named_state(target_name)
          : TwoPhotonState::normalized(io::parse_amplitudes(amp_text));
  optics::ProjectorRecipe recipe = optics::synthesize_projector(target);
  PolarizationOperator rebuilt = optics::recipe_operator(recipe);
  double fidelity = operator_fidelity(
      rebuilt, PolarizationOperator(target.projector()));

  json report{
      {"target", amplitudes_to_json(target.amplitudes())},
      {"gamma", recipe.gamma},
      {"eta", recipe.eta},
      {"concurrence", concurrence_pure(target)},
      {"vppbs",
       {{"t_h", recipe.vppbs.t_h},
        {"t_v", recipe.vppbs.t_v},
        {"t_h_squared", recipe.vppbs.t_h * recipe.vppbs.t_h},
        {"t_v_squared", recipe.vppbs.t_v * recipe.vppbs.t_v},
        {"delta", angle_to_json(recipe.vppbs.delta)}}},
      {"unitary_a", unitary_to_json(recipe.ua)},
      {"unitary_b", unitary_to_json(recipe.ub)},
      {"verification_fidelity", fidelity},
  };
  deliver(render_report(report, format), out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct TomographyArgs {
  std::string mode;
  bool sweep = false;
  double t_h = 0.5;
  double t_v = 0.458;
  double delta = 0.0;
  double t_v_fixed = 0.458;
  double t_h_min = 0.03;
  double t_h_max = 0.95;
  int points = 24;
  double rate_scale = 5.0;
  double duration = 420.0;
  std::uint64_t seed = 1;
  std::string counts_path;
  std::string out;
  std::string format;
  bool fit_rate_scale = false;
  NoiseFlags noise;
};

json reconstruction_to_json(const tomo::ReconstructionResult& rec) {
  double tr = rec.op.trace();
  json out{
      {"operator", matrix_to_json(rec.op.matrix())},
      {"trace", tr},
      {"log_likelihood", rec.log_likelihood},
      {"iterations", rec.iterations},
      {"converged", rec.converged},
      {"concurrence", tr > 0 ? concurrence_mixed(rec.op) : 0.0},
  };
  if (tr > 0) {
    out["normalized_operator"] = matrix_to_json(Matrix4c(rec.op.matrix() / tr));
  }
  if (rec.all_counts_zero) out["warning"] = "all counts were zero";
  return out;
}

int run_tomography(const TomographyArgs& args) {
  std::vector<tomo::Probe> probes = tomo::probe_states();

  if (args.mode == "ingest") {
    if (args.counts_path.empty()) {
      throw Error(ErrorKind::validation, "ingest mode needs --counts");
    }
    auto records = io::align_probe_counts(
        io::parse_counts_table(read_file(args.counts_path)), probes);
    tomo::ReconstructionOptions options;
    options.fit_rate_scale = args.fit_rate_scale;
    tomo::ReconstructionResult rec = tomo::reconstruct(records, probes, options);
    json report = reconstruction_to_json(rec);
    if (args.fit_rate_scale) {
      report["fitted_rate_multiplier"] = rec.fitted_rate_multiplier;
    }
    deliver(render_report(report, args.format), args.out);
    return rec.converged || rec.all_counts_zero ? kExitOk : kExitConvergence;
  }

  if (args.mode != "simulate") {
    throw Error(ErrorKind::validation,
                "mode must be 'simulate' or 'ingest', got '" + args.mode + "'");
  }

  if (args.sweep) {
    if (args.points < 2 || args.t_h_max <= args.t_h_min) {
      throw Error(ErrorKind::validation, "bad sweep grid");
    }
    std::vector<double> grid;
    for (int i = 0; i < args.points; ++i) {
      grid.push_back(args.t_h_min + (args.t_h_max - args.t_h_min) * i /
                                        (args.points - 1));
    }
    tomo::SweepOptions opts;
    opts.t_v_fixed = args.t_v_fixed;
    opts.rate_scale = args.rate_scale;
    opts.duration = args.duration;
    opts.seed = args.seed;
    opts.noise = args.noise.model();
    require_table_format(args.format);
    std::vector<tomo::SweepPoint> points = tomo::sweep_reconstruction(grid, opts);
    deliver(io::emit_sweep_table(points), args.out);
    for (const auto& p : points) {
      if (!p.converged) return kExitConvergence;
    }
    return kExitOk;
  }

  // Single-point simulation.
  optics::VppbsSettings settings =
      optics::VppbsSettings::from_transmissions(args.t_h, args.t_v, args.delta);
  std::optional<expsim::NoiseModel> noise = args.noise.model();
  PolarizationOperator op =
      noise ? expsim::noisy_povm(settings, *noise)
            : optics::compose_projector(settings).op;

  double calibration = args.rate_scale * args.duration;
  std::vector<tomo::CountRecord> records;
  Rng rng(args.seed);
  for (const auto& probe : probes) {
    tomo::CountRecord rec;
    rec.label = probe.label;
    double mean = noise ? expsim::expected_counts(op, probe.state, *noise,
                                                  calibration, args.duration)
                        : calibration * expectation(op, probe.state);
    rec.counts = static_cast<double>(rng.poisson(mean));
    rec.duration = args.duration;
    rec.rate_scale = calibration;
    records.push_back(rec);
  }
  tomo::ReconstructionResult rec = tomo::reconstruct(records, probes);
  json report = reconstruction_to_json(rec);
  json counts_json;
  for (const auto& r : records) counts_json[r.label] = r.counts;
  report["simulated_counts"] = counts_json;
  report["settings"] = {{"t_h_squared", args.t_h},
                        {"t_v_squared", args.t_v},
                        {"delta", angle_to_json(args.delta)},
                        {"gamma", settings.gamma()},
                        {"eta", settings.eta()}};
  report["fidelity_to_ideal"] = operator_fidelity(
      rec.op, optics::compose_projector(settings).op);
  deliver(render_report(report, args.format), args.out);
  return rec.converged ? kExitOk : kExitConvergence;
}

// ---------------------------------------------------------------------------

struct HardyArgs {
  std::string mode;
  double gamma = 0.645;
  double rate_scale = 5.0;
  double duration = 420.0;
  std::uint64_t seed = 1;
  std::string counts_path;
  std::string out;
  std::string format;
  std::vector<double> quoted_p1;
  std::vector<double> quoted_p2;
  NoiseFlags noise;
};

json value_sigma_to_json(const hardy::ValueWithSigma& v) {
  return json{{"value", v.value}, {"sigma", v.sigma}};
}

int run_hardy(const HardyArgs& args) {
  if (args.mode == "simulate") {
    std::optional<expsim::NoiseModel> noise = args.noise.model();
    expsim::NoiseModel model = noise.value_or(expsim::ideal_noise_model());
    require_table_format(args.format);
    hardy::HardyCounts counts = expsim::simulate_hardy_run(
        args.gamma, model, args.rate_scale, args.duration, args.seed);
    deliver(io::emit_hardy_table(counts, args.rate_scale * args.duration),
            args.out);
    return kExitOk;
  }
  if (args.mode != "analyze") {
    throw Error(ErrorKind::validation,
                "mode must be 'analyze' or 'simulate', got '" + args.mode + "'");
  }
  if (args.counts_path.empty()) {
    throw Error(ErrorKind::validation, "analyze mode needs --counts");
  }
  hardy::HardyCounts counts =
      io::parse_hardy_table(read_file(args.counts_path));

  json report;
  report["duration_s"] = counts.duration;
  json counts_json;
  const auto& labels = hardy::hardy_pair_labels();
  for (int i = 0; i < 6; ++i) counts_json[labels[i]] = counts.counts[i];
  report["counts"] = counts_json;

  if (std::abs(args.gamma) < 1.0) {
    hardy::HardyAngles angles = hardy::hardy_angles(args.gamma);
    double eta = optics::optimal_efficiency(args.gamma);
    json probabilities;
    for (int i = 0; i < 6; ++i) {
      auto [t1, t2] = hardy::hardy_pair_angles(angles, i);
      probabilities[labels[i]] =
          hardy::joint_probability(t1, t2, args.gamma, eta);
    }
    report["gamma"] = args.gamma;
    report["concurrence"] = std::sqrt(1.0 - args.gamma * args.gamma);
    report["angles"] = {{"alpha", angle_to_json(angles.alpha)},
                        {"beta", angle_to_json(angles.beta)},
                        {"alpha_perp", angle_to_json(angles.alpha_perp)},
                        {"beta_perp", angle_to_json(angles.beta_perp)}};
    report["ideal_probabilities"] = probabilities;
  }

  hardy::InequalityResult inequality = hardy::hardy_inequality(counts);
  report["inequality"] = {{"lhs", inequality.lhs},
                          {"sigma", inequality.sigma},
                          {"std_devs", inequality.std_devs}};

  auto override_of = [](const std::vector<double>& v) -> hardy::RatioOverride {
    if (v.empty()) return std::nullopt;
    if (v.size() != 2) {
      throw Error(ErrorKind::validation,
                  "quoted ratio needs two values: VALUE SIGMA");
    }
    return hardy::ValueWithSigma{v[0], v[1]};
  };
  hardy::ConditionalInference inference = hardy::conditional_inference(
      counts, override_of(args.quoted_p1), override_of(args.quoted_p2));
  report["conditional_inference"] = {
      {"p1_raw", value_sigma_to_json(inference.p1_raw)},
      {"p2_raw", value_sigma_to_json(inference.p2_raw)},
      {"p1_used", value_sigma_to_json(inference.p1_used)},
      {"p2_used", value_sigma_to_json(inference.p2_used)},
      {"expected_coincidences", value_sigma_to_json(inference.expected)},
      {"observed_coincidences", inference.observed},
      {"discrepancy_sigmas", inference.discrepancy_sigmas},
  };
  if (!args.quoted_p1.empty()) {
    report["conditional_inference"]["note"] =
        "p1 overridden by the quoted value; the raw-count ratio is p1_raw";
  }

  deliver(render_report(report, args.format), args.out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct HomScanArgs {
  double t_h = 1.0;
  double t_v = 1.0;
  double delta = 0.0;
  std::string input = "HH";
  std::string amplitudes;
  double sigma = 1.0;
  double tau_min = -5.0;
  double tau_max = 5.0;
  int points = 101;
  double rate_scale = 0.0;
  std::string out;
  std::string format;
  NoiseFlags noise;
};

int run_hom_scan(const HomScanArgs& args) {
  TwoPhotonState input = args.amplitudes.empty()
                             ? named_state(args.input)
                             : TwoPhotonState::normalized(
                                   io::parse_amplitudes(args.amplitudes));
  optics::VppbsSettings settings =
      optics::VppbsSettings::from_transmissions(args.t_h, args.t_v, args.delta);
  expsim::DelayScanRequest request;
  request.tau_min = args.tau_min;
  request.tau_max = args.tau_max;
  request.points = args.points;
  request.overlap_sigma = args.sigma;
  std::optional<expsim::NoiseModel> noise_opt = args.noise.model();
  expsim::NoiseModel noise = noise_opt.value_or(expsim::ideal_noise_model());
  if (!noise_opt) noise.hom_visibility = 1.0;

  require_table_format(args.format);
  expsim::DelayScan scan =
      expsim::coincidence_vs_delay(input, settings, request, noise);
  deliver(io::emit_delay_table(scan, args.rate_scale, noise.dark_rate),
          args.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "pairproj: arbitrary two-photon polarization projectors from "
      "polarization-dependent loss, two-photon interference, and "
      "post-selection"};
  app.require_subcommand(1);

  // synthesize -------------------------------------------------------------
  std::string target_name = "singlet";
  std::string target_amplitudes;
  std::string target_amplitudes_file;
  std::string synth_out;
  std::string synth_format;
  CLI::App* synth = app.add_subcommand(
      "synthesize", "settings and wave plate angles realizing a projector");
  synth->add_option("--target", target_name,
                    "named state (singlet, psi-plus, phi-plus, HV, DR, ...)");
  synth->add_option("--amplitudes", target_amplitudes,
                    "four comma-separated complex amplitudes re+imj");
  synth->add_option("--amplitudes-file", target_amplitudes_file,
                    "file holding the amplitude quadruple");
  synth->add_option("--out", synth_out, "output path (default: stdout)");
  synth->add_option("--format", synth_format, "json | json-compact");

  // tomography ---------------------------------------------------------------
  TomographyArgs tomo_args;
  CLI::App* tomo_cmd = app.add_subcommand(
      "tomography", "simulate or ingest detector-tomography counts");
  tomo_cmd->add_option("--mode", tomo_args.mode, "simulate | ingest")
      ->required();
  tomo_cmd->add_flag("--sweep", tomo_args.sweep, "sweep T_H at fixed T_V");
  tomo_cmd->add_option("--t-h", tomo_args.t_h, "transmission probability T_H")
      ->check(CLI::Range(0.0, 1.0));
  tomo_cmd->add_option("--t-v", tomo_args.t_v, "transmission probability T_V")
      ->check(CLI::Range(0.0, 1.0));
  tomo_cmd->add_option("--delta", tomo_args.delta, "VPPBS phase delta (rad)");
  tomo_cmd->add_option("--t-v-fixed", tomo_args.t_v_fixed,
                       "fixed T_V for the sweep")
      ->check(CLI::Range(0.0, 1.0));
  tomo_cmd->add_option("--t-h-min", tomo_args.t_h_min, "sweep start")
      ->check(CLI::Range(0.0, 1.0));
  tomo_cmd->add_option("--t-h-max", tomo_args.t_h_max, "sweep end")
      ->check(CLI::Range(0.0, 1.0));
  tomo_cmd->add_option("--points", tomo_args.points, "sweep points");
  tomo_cmd->add_option("--rate-scale", tomo_args.rate_scale,
                       "coincidences per second at unit probability");
  tomo_cmd->add_option("--duration", tomo_args.duration,
                       "acquisition seconds per probe");
  tomo_cmd->add_option("--seed", tomo_args.seed, "random seed");
  tomo_cmd->add_option("--counts", tomo_args.counts_path,
                       "counts file for ingest mode");
  tomo_cmd->add_option("--out", tomo_args.out, "output path");
  tomo_cmd->add_option("--format", tomo_args.format,
                       "json | json-compact (reports), csv (sweep)");
  tomo_cmd->add_flag("--fit-rate-scale", tomo_args.fit_rate_scale,
                     "fit a global rate multiplier during ingest");
  add_noise_flags(tomo_cmd, tomo_args.noise);

  // hardy --------------------------------------------------------------------
  HardyArgs hardy_args;
  CLI::App* hardy_cmd = app.add_subcommand(
      "hardy", "run or analyze the reversed Hardy test");
  hardy_cmd->add_option("--mode", hardy_args.mode, "analyze | simulate")
      ->required();
  hardy_cmd->add_option("--gamma", hardy_args.gamma, "splitting ratio")
      ->check(CLI::Range(-0.999999, 0.999999));
  hardy_cmd->add_option("--rate-scale", hardy_args.rate_scale,
                        "coincidences per second at unit probability");
  hardy_cmd->add_option("--duration", hardy_args.duration,
                        "acquisition seconds per setting");
  hardy_cmd->add_option("--seed", hardy_args.seed, "random seed");
  hardy_cmd->add_option("--counts", hardy_args.counts_path,
                        "six-row counts file for analyze mode");
  hardy_cmd->add_option("--out", hardy_args.out, "output path");
  hardy_cmd->add_option("--format", hardy_args.format,
                        "json | json-compact (analyze), csv (simulate)");
  hardy_cmd
      ->add_option("--quoted-p1", hardy_args.quoted_p1,
                   "override conditional p1: VALUE SIGMA")
      ->expected(2);
  hardy_cmd
      ->add_option("--quoted-p2", hardy_args.quoted_p2,
                   "override conditional p2: VALUE SIGMA")
      ->expected(2);
  add_noise_flags(hardy_cmd, hardy_args.noise);

  // hom-scan -------------------------------------------------------------
  HomScanArgs hom_args;
  CLI::App* hom_cmd = app.add_subcommand(
      "hom-scan", "coincidence probability versus photon delay");
  hom_cmd->add_option("--t-h", hom_args.t_h, "transmission probability T_H")
      ->check(CLI::Range(0.0, 1.0));
  hom_cmd->add_option("--t-v", hom_args.t_v, "transmission probability T_V")
      ->check(CLI::Range(0.0, 1.0));
  hom_cmd->add_option("--delta", hom_args.delta, "VPPBS phase delta (rad)");
  hom_cmd->add_option("--input", hom_args.input, "named input state");
  hom_cmd->add_option("--amplitudes", hom_args.amplitudes,
                      "input state amplitudes re+imj,...");
  hom_cmd->add_option("--sigma", hom_args.sigma, "overlap sigma (coherence lengths)")
      ->check(CLI::PositiveNumber);
  hom_cmd->add_option("--tau-min", hom_args.tau_min, "scan start");
  hom_cmd->add_option("--tau-max", hom_args.tau_max, "scan end");
  hom_cmd->add_option("--points", hom_args.points, "scan points");
  hom_cmd->add_option("--rate-scale", hom_args.rate_scale,
                      "emit rates instead of probabilities when > 0");
  hom_cmd->add_option("--out", hom_args.out, "output path");
  hom_cmd->add_option("--format", hom_args.format, "csv");
  add_noise_flags(hom_cmd, hom_args.noise);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (synth->parsed()) {
      return cmd_synthesize(target_name, target_amplitudes,
                            target_amplitudes_file, synth_out, synth_format);
    }
    if (tomo_cmd->parsed()) {
      return run_tomography(tomo_args);
    }
    if (hardy_cmd->parsed()) {
      return run_hardy(hardy_args);
    }
    if (hom_cmd->parsed()) {
      return run_hom_scan(hom_args);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::convergence ? kExitConvergence
                                              : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
