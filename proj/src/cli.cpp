#include "popper/cli.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <tuple>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include "json.hpp"

#include "popper/analysis.hpp"
#include "popper/decimal.hpp"
#include "popper/diffraction.hpp"
#include "popper/units.hpp"

namespace popper::cli {

using nlohmann::json;

namespace {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

json config_to_json(const ApparatusConfig& cfg) {
  json obj = json::object();
  std::istringstream lines(serialize_config(cfg));
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find(" = ");
    obj[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return obj;
}

ApparatusConfig config_from_json(const json& obj) {
  std::string text;
  for (const auto& [key, value] : obj.items()) text += fmt::format("{} = {}\n", key, value.get<std::string>());
  return parse_config(text);
}

json reproducible_fields(const RunManifest& m) {
  return json{
      {"tool_version", m.tool_version},
      {"config", config_to_json(m.config)},
      {"slit_interaction", std::string(to_string(m.slit_interaction))},
      {"master_seed", m.master_seed},
      {"trials_per_position", m.trials},
      {"scan", {{"min_mm", m.scan_min_mm}, {"max_mm", m.scan_max_mm}, {"step_mm", m.scan_step_mm}}},
  };
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << content;
  out.flush();
  if (!out) throw std::runtime_error(fmt::format("write to {} failed", path.string()));
}

std::string mm(double si) { return decimal::format_scaled(si, units::millimetre_exp); }

} // namespace

CsvParseError::CsvParseError(std::size_t line, const std::string& what)
    : std::runtime_error(fmt::format("line {}: {}", line, what)), line_(line) {}

std::string RunManifest::to_json() const {
  json j = reproducible_fields(*this);
  j["digest"] = digest();
  j["outputs"] = {{"csv", csv_path}, {"manifest", manifest_path}};
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(std::string_view text) {
  const json j = json::parse(text);
  RunManifest m;
  m.tool_version = j.at("tool_version").get<std::string>();
  m.config = config_from_json(j.at("config"));
  m.slit_interaction = parse_slit_interaction(j.at("slit_interaction").get<std::string>());
  m.master_seed = j.at("master_seed").get<std::uint64_t>();
  m.trials = j.at("trials_per_position").get<std::uint64_t>();
  m.scan_min_mm = j.at("scan").at("min_mm").get<double>();
  m.scan_max_mm = j.at("scan").at("max_mm").get<double>();
  m.scan_step_mm = j.at("scan").at("step_mm").get<double>();
  if (j.contains("outputs")) {
    m.csv_path = j["outputs"].value("csv", "");
    m.manifest_path = j["outputs"].value("manifest", "");
  }
  if (j.contains("digest") && j["digest"].get<std::string>() != m.digest())
    throw std::runtime_error("manifest digest does not match its contents");
  return m;
}

std::string RunManifest::digest() const {
  return fmt::format("fnv1a64:{:016x}", fnv1a64(reproducible_fields(*this).dump()));
}

std::string write_scan_csv(const ScanHistogram& hist, const RunManifest& manifest) {
  hist.validate();
  std::string out;
  out += fmt::format("# popper {} scan\n", manifest.tool_version);
  out += fmt::format("# manifest_digest={}\n", manifest.digest());
  out += fmt::format("# seed={}\n", hist.seed);
  out += fmt::format("# trials_per_position={}\n", hist.trials_per_position);
  out += fmt::format("# slit_b_present={}\n", manifest.config.slit_b_present);
  out += fmt::format("# lens_enabled={}\n", manifest.config.lens_enabled);
  out += fmt::format("# slit_interaction={}\n", to_string(manifest.slit_interaction));
  out += kCsvHeader;
  out += '\n';
  for (std::size_t i = 0; i < hist.size(); ++i)
    out += fmt::format("{},{},{},{}\n", mm(hist.positions[i]), hist.coincidence[i], hist.singles[i],
                       hist.trials_per_position);
  return out;
}

ScanHistogram parse_scan_csv(std::string_view text) {
  ScanHistogram hist;
  bool header_seen = false;
  bool trials_seen = false;
  std::size_t line_no = 0;
  auto parse_count = [&](std::string_view field, std::size_t line) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || p != field.data() + field.size())
      throw CsvParseError(line, fmt::format("`{}` is not a count", field));
    return v;
  };

  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view seed_key = "# seed=";
      if (line.starts_with(seed_key)) hist.seed = parse_count(line.substr(seed_key.size()), line_no);
      continue;
    }
    if (!header_seen) {
      if (line != kCsvHeader) throw CsvParseError(line_no, fmt::format("expected header `{}`", kCsvHeader));
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 4) throw CsvParseError(line_no, "expected 4 fields");
    const auto y = decimal::parse_scaled(fields[0], units::millimetre_exp);
    if (!y) throw CsvParseError(line_no, fmt::format("`{}` is not a position", fields[0]));
    const auto trials = parse_count(fields[3], line_no);
    if (trials_seen && trials != hist.trials_per_position)
      throw CsvParseError(line_no, "trial count differs between rows");
    trials_seen = true;
    hist.trials_per_position = trials;
    hist.positions.push_back(*y);
    hist.coincidence.push_back(parse_count(fields[1], line_no));
    hist.singles.push_back(parse_count(fields[2], line_no));
    if (hist.positions.size() > 1 && !(hist.positions.back() > hist.positions[hist.size() - 2]))
      throw CsvParseError(line_no, "positions must be strictly increasing");
    if (hist.coincidence.back() > trials || hist.singles.back() > trials)
      throw CsvParseError(line_no, "count exceeds trials");
  }
  if (!header_seen) throw CsvParseError(line_no + 1, "missing CSV header");
  if (hist.positions.empty()) throw CsvParseError(line_no + 1, "no data rows");
  return hist;
}

std::vector<RegressionRow> paper_regression_rows(const PhysicalConstants& k) {
  const ApparatusConfig cfg;
  const auto photon = PhotonKinematics::of(cfg.photon_wavelength, k);
  const DiffractionGeometry geom{cfg.slit_b_width, cfg.photon_wavelength, cfg.dist_slit_b_to_d2};
  const double y1 = first_minimum(geom);

  std::vector<RegressionRow> rows;
  auto add = [&](std::string name, std::string unit, double value, std::string printed) {
    const bool ok = decimal::matches_printed(value, printed);
    rows.push_back({std::move(name), std::move(unit), value, std::move(printed), ok});
  };
  add("photon energy E", "J", photon.energy, "2.82893e-19");
  add("photon momentum P", "kg m/s", photon.momentum, "9.43631e-28");
  add("dynamic mass M", "kg", photon.dynamic_mass, "3.14761e-36");
  add("first minimum lambda D / s", "mm", y1 / units::millimetre, "2.194375");
  add("recovered h = s P y1 / D", "J s", cfg.slit_b_width * photon.momentum * y1 / cfg.dist_slit_b_to_d2,
      "6.626176e-34");

  const auto present = kinematics_report(Scenario::SlitBPresent, cfg, std::nullopt, k);
  const auto ghost = kinematics_report(Scenario::GhostSlit, cfg, std::nullopt, k);
  const auto source = kinematics_report(Scenario::SourceDiffraction, cfg, std::nullopt, k);
  add("oblique path D'", "mm", present.path / units::millimetre, "500.00484");
  add("flight time over 500 mm", "s", ghost.transit_time, "1.6678e-9");
  add("flight time over 1245 mm", "s", source.transit_time, "4.15287e-9");

  const std::array<std::tuple<const KinematicsReport*, const char*, const char*, const char*, const char*>, 3>
      cols{{{&present, "1.3191e6", "4.1520e-30", "6.643e-34", "1.00"},
            {&ghost, "5.3963e5", "1.6985e-30", "2.718e-34", "0.41"},
            {&source, "2.1672e5", "6.82142e-31", "1.09142e-34", "0.1647"}}};
  for (const auto& [r, vy, py, prod, ratio] : cols) {
    const std::string tag(to_string(r->scenario));
    add(tag + " v_y", "m/s", r->v_y, vy);
    add(tag + " P_y", "kg m/s", r->p_y, py);
    add(tag + " dy*dP_y", "J s", r->product, prod);
    add(tag + " ratio to h", "", r->ratio_to_h, ratio);
  }
  return rows;
}

int cmd_reproduce_paper(const PhysicalConstants& k, std::ostream& out) {
  const auto rows = paper_regression_rows(k);
  fmt::print(out, "constants: h = {:.7e} J s, c = {:.7e} m/s\n\n", k.h, k.c);
  fmt::print(out, "{:<34} {:>18} {:>14} {:<8} {}\n", "quantity", "computed", "reference", "unit", "status");
  std::size_t failures = 0;
  for (const auto& r : rows) {
    fmt::print(out, "{:<34} {:>18.9g} {:>14} {:<8} {}\n", r.name, r.computed, r.printed, r.unit,
               r.ok ? "ok" : "MISMATCH");
    failures += r.ok ? 0 : 1;
  }

  const ApparatusConfig cfg;
  out << '\n';
  for (Scenario s : {Scenario::SlitBPresent, Scenario::GhostSlit, Scenario::SourceDiffraction}) {
    const auto r = kinematics_report(s, cfg, std::nullopt, k);
    fmt::print(out, "{:<20} ratio {:.4f}  {}\n", to_string(s), r.ratio_to_h,
               r.apparent_violation ? "apparent violation of the uncertainty relation" : "consistent with h");
  }
  if (failures) {
    fmt::print(out, "\n{} value(s) do not match the reference digits:\n", failures);
    for (const auto& r : rows)
      if (!r.ok) fmt::print(out, "  {}: computed {:.9g}, expected {}\n", r.name, r.computed, r.printed);
    return 1;
  }
  fmt::print(out, "\nall {} values match\n", rows.size());
  return 0;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& csv) {
  auto p = csv;
  p += ".manifest.json";
  return p;
}

ScanHistogram execute_manifest(const RunManifest& manifest, unsigned workers) {
  const auto grid = make_scan_grid(manifest.scan_min_mm, manifest.scan_max_mm, manifest.scan_step_mm);
  const auto hist = run_scan(manifest.config, grid, manifest.trials, manifest.master_seed,
                             ScanOptions{workers, manifest.slit_interaction});
  write_file(manifest.csv_path, write_scan_csv(hist, manifest));
  write_file(manifest.manifest_path, manifest.to_json());
  return hist;
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  RunManifest m;
  try {
    if (opts.config_path) m.config = load_config(*opts.config_path);
    if (opts.slit_b_present) m.config.slit_b_present = *opts.slit_b_present;
    if (opts.lens_enabled) m.config.lens_enabled = *opts.lens_enabled;
    m.config.validate();
    if (!(opts.scan_step_mm > 0.0)) throw std::invalid_argument("--scan-step must be positive");
    if (opts.scan_max_mm < opts.scan_min_mm) throw std::invalid_argument("--scan-max is below --scan-min");
  } catch (const std::exception& e) {
    fmt::print(err, "popper simulate: {}\n", e.what());
    return 2;
  }
  m.slit_interaction = opts.slit_interaction;
  m.master_seed = opts.seed;
  m.trials = opts.trials;
  m.scan_min_mm = opts.scan_min_mm;
  m.scan_max_mm = opts.scan_max_mm;
  m.scan_step_mm = opts.scan_step_mm;
  m.csv_path = opts.out.string();
  m.manifest_path = manifest_path_for(opts.out).string();
  try {
    const auto hist = execute_manifest(m, opts.workers);
    fmt::print(out, "wrote {} ({} positions x {} trials) and {}\n", m.csv_path, hist.size(), m.trials,
               m.manifest_path);
  } catch (const std::exception& e) {
    fmt::print(err, "popper simulate: {}\n", e.what());
    return 1;
  }
  return 0;
}

int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& err) {
  ScanHistogram hist;
  ApparatusConfig cfg;
  try {
    if (opts.config_path) cfg = load_config(*opts.config_path);
    hist = parse_scan_csv(read_file(opts.csv));
  } catch (const std::exception& e) {
    fmt::print(err, "popper analyze: {}\n", e.what());
    return 2;
  }

  const DiffractionGeometry geom{cfg.slit_b_width, cfg.photon_wavelength, cfg.dist_slit_b_to_d2};
  const double aperture = 0.5 * cfg.detector_diameter;
  fmt::print(out, "scan: {} positions, {} .. {} mm, {} trials per position, seed {}\n", hist.size(),
             mm(hist.positions.front()), mm(hist.positions.back()), hist.trials_per_position, hist.seed);
  fmt::print(out, "expected first minimum lambda D / s: {:.6f} mm\n", first_minimum(geom) / units::millimetre);

  std::optional<double> minimum;
  for (Profile p : {Profile::Coincidence, Profile::Singles}) {
    try {
      const double y = extract_first_minimum(hist, geom, p);
      if (p == Profile::Coincidence) minimum = y;
      fmt::print(out, "first minimum ({}): {} mm\n", to_string(p), mm(y));
    } catch (const FeatureNotFound& e) {
      fmt::print(out, "first minimum ({}): not found ({})\n", to_string(p), e.what());
    }
  }
  for (Profile p : {Profile::Coincidence, Profile::Singles}) {
    try {
      fmt::print(out, "FWHM ({}): {:.4f} mm\n", to_string(p), profile_width(hist, p) / units::millimetre);
    } catch (const FeatureNotFound& e) {
      fmt::print(out, "FWHM ({}): not found ({})\n", to_string(p), e.what());
    }
  }
  const IntensityModel model = [&geom](double y) { return relative_intensity(geom, y); };
  for (Profile p : {Profile::Coincidence, Profile::Singles}) {
    try {
      const auto fit = goodness_of_fit(hist, p, model, aperture);
      fmt::print(out, "chi-square vs single-slit intensity ({}): {:.2f} on {} dof, p = {:.4g}\n", to_string(p),
                 fit.statistic, fit.dof, fit.p_value);
    } catch (const InsufficientCounts& e) {
      fmt::print(out, "chi-square vs single-slit intensity ({}): not computed ({})\n", to_string(p), e.what());
    }
  }
  try {
    const auto cmp = compare_profiles(hist);
    fmt::print(out, "chi-square singles vs coincidence shape: {:.2f} on {} dof, p = {:.4g}\n", cmp.statistic,
               cmp.dof, cmp.p_value);
  } catch (const InsufficientCounts& e) {
    fmt::print(out, "chi-square singles vs coincidence shape: not computed ({})\n", e.what());
  }
  if (minimum && *minimum > 0.0) {
    const auto r = kinematics_report(Scenario::SlitBPresent, cfg, *minimum);
    fmt::print(out,
               "kinematics at the measured minimum: path {:.5f} mm, t {:.5e} s, v_y {:.5e} m/s, "
               "P_y {:.5e} kg m/s, dy*dP_y {:.4e} J s, ratio to h {:.4f}{}\n",
               r.path / units::millimetre, r.transit_time, r.v_y, r.p_y, r.product, r.ratio_to_h,
               r.apparent_violation ? " (apparent violation)" : "");
  }
  return 0;
}

int cmd_replay(const std::filesystem::path& manifest_path, std::optional<std::filesystem::path> out,
               std::ostream& log, std::ostream& err) {
  RunManifest m;
  try {
    m = RunManifest::from_json(read_file(manifest_path));
  } catch (const std::exception& e) {
    fmt::print(err, "popper replay: {}\n", e.what());
    return 2;
  }
  if (out) {
    m.csv_path = out->string();
    m.manifest_path = manifest_path_for(*out).string();
  }
  if (m.csv_path.empty()) {
    fmt::print(err, "popper replay: manifest records no CSV path; pass --out\n");
    return 2;
  }
  try {
    execute_manifest(m);
  } catch (const std::exception& e) {
    fmt::print(err, "popper replay: {}\n", e.what());
    return 1;
  }
  fmt::print(log, "replayed {} into {}\n", m.digest(), m.csv_path);
  return 0;
}

} // namespace popper::cli
