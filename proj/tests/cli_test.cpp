#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "pairproj/hardy.hpp"
#include "pairproj/io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code;
  std::string stdout_text;
};

fs::path work_dir() {
  fs::path dir = fs::temp_directory_path() / "pairproj_cli_tests";
  fs::create_directories(dir);
  return dir;
}

CliResult run_cli(const std::string& args) {
  fs::path out = work_dir() / "stdout.txt";
  std::string command = std::string(PAIRPROJ_CLI_PATH) + " " + args + " > " +
                        out.string() + " 2>/dev/null";
  int status = std::system(command.c_str());
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out, std::ios::binary);
  std::string text(std::istreambuf_iterator<char>(in),
                   std::istreambuf_iterator<char>{});
  return CliResult{code, text};
}

std::string write_file(const std::string& name, const std::string& body) {
  fs::path path = work_dir() / name;
  std::ofstream out(path, std::ios::binary);
  out << body;
  return path.string();
}

}  // namespace

TEST_CASE("synthesize singlet reports gamma 0 and eta 1") {
  CliResult r = run_cli("synthesize --target singlet");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("\"gamma\": 0.0") != std::string::npos);
  CHECK(r.stdout_text.find("\"eta\": 1.0") != std::string::npos);
  CHECK(r.stdout_text.find("verification_fidelity") != std::string::npos);
}

TEST_CASE("synthesize rejects malformed amplitudes with exit code 2") {
  CliResult r = run_cli("synthesize --amplitudes 1+0j,zzz,0+0j,0+0j");
  CHECK(r.exit_code == 2);
}

TEST_CASE("unknown flags are validation errors") {
  CliResult r = run_cli("synthesize --no-such-flag 3");
  CHECK(r.exit_code == 2);
}

TEST_CASE("tomography ingest of exact probabilities reconstructs tightly") {
  // Exact expected counts for the singlet projector at rate 1e4.
  auto probes = pairproj::tomo::probe_states();
  auto op = pairproj::optics::singlet_projector();
  std::vector<pairproj::tomo::CountRecord> records;
  for (const auto& probe : probes) {
    pairproj::tomo::CountRecord rec;
    rec.label = probe.label;
    rec.counts = 1e4 * pairproj::expectation(op, probe.state);
    rec.duration = 1.0;
    rec.rate_scale = 1e4;
    records.push_back(rec);
  }
  std::string path =
      write_file("exact_counts.csv", pairproj::io::emit_counts_table(records));
  CliResult r = run_cli("tomography --mode ingest --counts " + path);
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("\"converged\": true") != std::string::npos);
  // The reconstructed HV/VH block of the singlet: 0.5 diagonals.
  CHECK(r.stdout_text.find("normalized_operator") != std::string::npos);
}

TEST_CASE("tomography ingest with missing labels exits 2 and names them") {
  std::string path = write_file(
      "short_counts.csv",
      "label,counts,duration_s,rate_scale\nHH,5,1,100\nVH,5,1,100\n");
  CliResult r = run_cli("tomography --mode ingest --counts " + path);
  CHECK(r.exit_code == 2);
}

TEST_CASE("validation failures do not leave partial output files") {
  fs::path out = work_dir() / "never_written.csv";
  std::error_code ec;
  fs::remove(out, ec);
  CliResult r = run_cli(
      "tomography --mode ingest --counts /nonexistent/file.csv --out " +
      out.string());
  CHECK(r.exit_code == 2);
  CHECK(!fs::exists(out));
}

TEST_CASE("hardy simulate then analyze round-trips through the table format") {
  fs::path counts = work_dir() / "sim_counts.csv";
  CliResult sim = run_cli(
      "hardy --mode simulate --gamma 0.645 --rate-scale 80 --duration 420 "
      "--seed 12 --out " +
      counts.string());
  REQUIRE(sim.exit_code == 0);
  REQUIRE(fs::exists(counts));

  CliResult analyze =
      run_cli("hardy --mode analyze --gamma 0.645 --counts " + counts.string());
  CHECK(analyze.exit_code == 0);
  CHECK(analyze.stdout_text.find("inequality") != std::string::npos);
  CHECK(analyze.stdout_text.find("conditional_inference") != std::string::npos);

  // The simulated file parses back into the same six counts.
  std::ifstream in(counts, std::ios::binary);
  std::string body(std::istreambuf_iterator<char>(in),
                   std::istreambuf_iterator<char>{});
  pairproj::hardy::HardyCounts parsed = pairproj::io::parse_hardy_table(body);
  CHECK(parsed.duration == 420.0);
}

TEST_CASE("hardy analyze on the published counts quotes the key numbers") {
  pairproj::hardy::HardyCounts table;
  table.counts = {727.0, 340.0, 497.0, 1984.0, 1404.0, 1391.0};
  table.duration = 420.0;
  std::string path =
      write_file("table1.csv", pairproj::io::emit_hardy_table(table, 1.0));
  CliResult r = run_cli(
      "hardy --mode analyze --gamma 0.645 --counts " + path +
      " --quoted-p1 0.822 0.03 --quoted-p2 0.737 0.03");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("\"lhs\": 420.0") != std::string::npos);
  CHECK(r.stdout_text.find("\"observed_coincidences\": 727.0") !=
        std::string::npos);
}

TEST_CASE("hom-scan emits a two-column table with the HOM dip") {
  CliResult r = run_cli(
      "hom-scan --t-h 1 --t-v 1 --input HH --points 11 --tau-min -5 "
      "--tau-max 5 --ideal");
  CHECK(r.exit_code == 0);
  pairproj::io::Table table = pairproj::io::parse_table(r.stdout_text);
  CHECK(table.header == std::vector<std::string>{"delay", "probability"});
  REQUIRE(table.rows.size() == 11);
  CHECK(table.rows[5][0] == 0.0);
  CHECK(table.rows[5][1] == doctest::Approx(0.0));
  // The edge of a +/-5 sigma scan still carries the 2e-6 Gaussian tail.
  CHECK(table.rows[0][1] == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("format tags select report shape and reject mismatches") {
  CliResult compact =
      run_cli("synthesize --target singlet --format json-compact");
  CHECK(compact.exit_code == 0);
  CHECK(compact.stdout_text.find("\n") == compact.stdout_text.size() - 1);

  CliResult bad = run_cli("synthesize --target singlet --format csv");
  CHECK(bad.exit_code == 2);

  CliResult table_bad = run_cli("hom-scan --points 5 --format json");
  CHECK(table_bad.exit_code == 2);
}

TEST_CASE("amplitudes can come from a file") {
  std::string path = write_file("amps.txt", "0+0j,1+0j,0+0j,0+0j\n");
  CliResult r = run_cli("synthesize --amplitudes-file " + path);
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("\"eta\": 0.5") != std::string::npos);
}

TEST_CASE("sweep output parses as a table") {
  CliResult r = run_cli(
      "tomography --mode simulate --sweep --points 4 --t-h-min 0.1 "
      "--t-h-max 0.9 --t-v-fixed 0.458 --rate-scale 5 --duration 420 "
      "--seed 5");
  CHECK(r.exit_code == 0);
  pairproj::io::Table table = pairproj::io::parse_table(r.stdout_text);
  CHECK(table.rows.size() == 4);
}
