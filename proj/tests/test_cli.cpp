#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "popper/cli.hpp"
#include "popper/diffraction.hpp"

using namespace popper;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  auto dir = fs::temp_directory_path() / "popper_cli_tests";
  fs::create_directories(dir);
  return dir;
}

cli::SimulateOptions small_run(const fs::path& out) {
  cli::SimulateOptions o;
  o.trials = 2000;
  o.seed = 1;
  o.scan_min_mm = -0.5;
  o.scan_max_mm = 3.0;
  o.scan_step_mm = 0.25;
  o.out = out;
  return o;
}

} // namespace

TEST_CASE("reproduce-paper") {
  std::ostringstream a;
  CHECK(cli::cmd_reproduce_paper(kReferenceConstants, a) == 0);
  const auto text = a.str();
  for (const char* v : {"2.82893e-19", "9.43631e-28", "3.14761e-36", "2.194375", "500.00484", "6.643e-34",
                        "2.718e-34", "1.09142e-34", "0.41", "0.1647"})
    CHECK(text.find(v) != std::string::npos);
  CHECK(text.find("MISMATCH") == std::string::npos);

  std::ostringstream b;
  cli::cmd_reproduce_paper(kReferenceConstants, b);
  CHECK(a.str() == b.str());

  std::ostringstream modern;
  CHECK(cli::cmd_reproduce_paper(PhysicalConstants::codata2018(), modern) != 0);
  CHECK(modern.str().find("MISMATCH") != std::string::npos);

  for (const auto& row : cli::paper_regression_rows(kReferenceConstants)) CHECK_MESSAGE(row.ok, row.name);
}

TEST_CASE("simulate is deterministic and writes a manifest") {
  const auto dir = scratch_dir();
  std::ostringstream out, err;
  REQUIRE(cli::cmd_simulate(small_run(dir / "a.csv"), out, err) == 0);
  REQUIRE(cli::cmd_simulate(small_run(dir / "b.csv"), out, err) == 0);
  const auto a = slurp(dir / "a.csv");
  CHECK(a == slurp(dir / "b.csv"));
  CHECK(a.find("y_mm,coincidence,singles,trials\n") != std::string::npos);
  CHECK(a.find("# manifest_digest=fnv1a64:") != std::string::npos);

  const auto manifest = cli::RunManifest::from_json(slurp(dir / "a.csv.manifest.json"));
  CHECK(manifest.master_seed == 1);
  CHECK(manifest.trials == 2000);
  CHECK(manifest.config == ApparatusConfig{});
  CHECK(a.find(manifest.digest()) != std::string::npos);

  // Parallel run with the same seed writes the same bytes.
  auto par = small_run(dir / "c.csv");
  par.workers = 3;
  REQUIRE(cli::cmd_simulate(par, out, err) == 0);
  CHECK(slurp(dir / "c.csv") == a);
}

TEST_CASE("replay regenerates a run from its manifest alone") {
  const auto dir = scratch_dir();
  std::ostringstream out, err;
  auto opts = small_run(dir / "orig.csv");
  opts.slit_b_present = false;
  opts.slit_interaction = SlitInteraction::AddKick;
  REQUIRE(cli::cmd_simulate(opts, out, err) == 0);
  REQUIRE(cli::cmd_replay(dir / "orig.csv.manifest.json", dir / "again.csv", out, err) == 0);
  CHECK(slurp(dir / "orig.csv") == slurp(dir / "again.csv"));

  // Tampering is caught by the digest.
  auto text = slurp(dir / "orig.csv.manifest.json");
  text.replace(text.find("\"master_seed\": 1"), 16, "\"master_seed\": 2");
  { std::ofstream(dir / "tampered.json") << text; }
  CHECK(cli::cmd_replay(dir / "tampered.json", dir / "t.csv", out, err) == 2);
}

TEST_CASE("simulate edge cases") {
  const auto dir = scratch_dir();
  std::ostringstream out, err;

  auto zero = small_run(dir / "zero.csv");
  zero.trials = 0;
  REQUIRE(cli::cmd_simulate(zero, out, err) == 0);
  const auto h = cli::parse_scan_csv(slurp(dir / "zero.csv"));
  for (std::size_t i = 0; i < h.size(); ++i) {
    CHECK(h.coincidence[i] == 0);
    CHECK(h.singles[i] == 0);
  }

  auto unwritable = small_run(dir / "no_such_dir" / "x.csv");
  CHECK(cli::cmd_simulate(unwritable, out, err) != 0);

  auto bad_step = small_run(dir / "s.csv");
  bad_step.scan_step_mm = 0.0;
  CHECK(cli::cmd_simulate(bad_step, out, err) == 2);

  auto reversed = small_run(dir / "r.csv");
  reversed.scan_min_mm = 2.0;
  reversed.scan_max_mm = 1.0;
  CHECK(cli::cmd_simulate(reversed, out, err) == 2);

  auto missing_cfg = small_run(dir / "m.csv");
  missing_cfg.config_path = dir / "missing.cfg";
  CHECK(cli::cmd_simulate(missing_cfg, out, err) == 2);
}

TEST_CASE("CSV parsing") {
  CHECK_THROWS_AS(cli::parse_scan_csv(""), cli::CsvParseError);
  CHECK_THROWS_AS(cli::parse_scan_csv("# only comments\n"), cli::CsvParseError);
  CHECK_THROWS_AS(cli::parse_scan_csv("y_mm,coincidence,singles,trials\n"), cli::CsvParseError);
  try {
    cli::parse_scan_csv("y_mm,coincidence,singles,trials\n0,1,2,10\n0.1,x,2,10\n");
    FAIL("expected parse error");
  } catch (const cli::CsvParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(cli::parse_scan_csv("y,c\n"), cli::CsvParseError);
  CHECK_THROWS_AS(cli::parse_scan_csv("y_mm,coincidence,singles,trials\n0,1,2\n"), cli::CsvParseError);
  CHECK_THROWS_AS(cli::parse_scan_csv("y_mm,coincidence,singles,trials\n0,1,2,10\n0,1,2,10\n"), cli::CsvParseError);
  CHECK_THROWS_AS(cli::parse_scan_csv("y_mm,coincidence,singles,trials\n0,1,2,10\n1,1,2,11\n"), cli::CsvParseError);
  CHECK_THROWS_AS(cli::parse_scan_csv("y_mm,coincidence,singles,trials\n0,11,2,10\n"), cli::CsvParseError);

  const auto h = cli::parse_scan_csv("# seed=77\ny_mm,coincidence,singles,trials\n-0.5,1,2,10\n0.15,3,4,10\n");
  CHECK(h.seed == 77);
  CHECK(h.positions == std::vector<double>{-0.5e-3, 0.15e-3});
  CHECK(h.coincidence == std::vector<std::uint64_t>{1, 3});
  CHECK(h.singles == std::vector<std::uint64_t>{2, 4});
  CHECK(h.trials_per_position == 10);
}

TEST_CASE("CSV write/parse round trip preserves the histogram") {
  ScanHistogram h;
  h.positions = make_scan_grid(-1.0, 1.0, 0.05);
  h.trials_per_position = 1000;
  h.seed = 99;
  for (std::size_t i = 0; i < h.positions.size(); ++i) {
    h.singles.push_back(i * 7 % 1000);
    h.coincidence.push_back(i * 3 % 500 / 2);
  }
  cli::RunManifest m;
  m.master_seed = 99;
  const auto text = cli::write_scan_csv(h, m);
  CHECK(cli::parse_scan_csv(text) == h);
  CHECK(cli::write_scan_csv(cli::parse_scan_csv(text), m) == text);
}

TEST_CASE("analyze") {
  const auto dir = scratch_dir();
  std::ostringstream out, err;

  { std::ofstream(dir / "empty.csv"); }
  CHECK(cli::cmd_analyze({dir / "empty.csv", std::nullopt}, out, err) == 2);
  CHECK(err.str().find("line") != std::string::npos);

  // Oracle-generated input: expected counts are the single-slit intensity
  // averaged over the 0.18 mm detector by Simpson's rule.
  const ApparatusConfig cfg;
  const DiffractionGeometry g{cfg.slit_b_width, cfg.photon_wavelength, cfg.dist_slit_b_to_d2};
  ScanHistogram h;
  h.positions = make_scan_grid(-0.5, 3.0, 0.05);
  h.trials_per_position = 1'000'000;
  h.seed = 5;
  for (double y : h.positions) {
    const double a = 0.5 * cfg.detector_diameter;
    double acc = 0.0;
    constexpr int m = 100;
    for (int j = 0; j <= m; ++j) {
      const double w = (j == 0 || j == m) ? 1.0 : (j % 2 ? 4.0 : 2.0);
      acc += w * relative_intensity(g, y - a + 2.0 * a * j / m);
    }
    const auto c = static_cast<std::uint64_t>(std::llround(5000.0 * acc / (3.0 * m)));
    h.coincidence.push_back(c);
    h.singles.push_back(c);
  }
  {
    std::ofstream f(dir / "eq1.csv");
    f << cli::write_scan_csv(h, cli::RunManifest{});
  }
  std::ostringstream report;
  REQUIRE(cli::cmd_analyze({dir / "eq1.csv", std::nullopt}, report, err) == 0);
  const auto text = report.str();
  CHECK(text.find("first minimum (coincidence): 2.2 mm") != std::string::npos);
  const auto pos = text.find("chi-square vs single-slit intensity (coincidence)");
  REQUIRE(pos != std::string::npos);
  const auto p_at = text.find("p = ", pos);
  const double p = std::stod(text.substr(p_at + 4));
  CHECK(p > 0.01);
  CHECK(text.find("kinematics at the measured minimum") != std::string::npos);
}

TEST_CASE("manifest JSON round trip") {
  cli::RunManifest m;
  m.config.slit_b_present = false;
  m.config.beam_half_divergence = 1.25e-3;
  m.master_seed = 0xfffffffffffffff1ULL;
  m.trials = 12345;
  m.scan_step_mm = 0.1;
  m.csv_path = "x.csv";
  m.manifest_path = "x.csv.manifest.json";
  const auto back = cli::RunManifest::from_json(m.to_json());
  CHECK(back.config == m.config);
  CHECK(back.master_seed == m.master_seed);
  CHECK(back.trials == m.trials);
  CHECK(back.scan_step_mm == m.scan_step_mm);
  CHECK(back.csv_path == m.csv_path);
  CHECK(back.digest() == m.digest());
  cli::RunManifest other = m;
  other.master_seed = 1;
  CHECK(other.digest() != m.digest());
}
