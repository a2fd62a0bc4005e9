#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "popper/apparatus.hpp"
#include "popper/engine.hpp"
#include "popper/histogram.hpp"
#include "popper/kinematics.hpp"

namespace popper::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kCsvHeader = "y_mm,coincidence,singles,trials";

class CsvParseError : public std::runtime_error {
public:
  CsvParseError(std::size_t line, const std::string& what);
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Everything needed to regenerate a scan bit-exactly.
struct RunManifest {
  ApparatusConfig config;
  SlitInteraction slit_interaction = SlitInteraction::Redirect;
  std::uint64_t master_seed = 1;
  std::uint64_t trials = 1'000'000;
  double scan_min_mm = -0.5;
  double scan_max_mm = 3.0;
  double scan_step_mm = 0.05;
  std::string tool_version{kToolVersion};
  std::string csv_path;
  std::string manifest_path;

  [[nodiscard]] std::string to_json() const;
  static RunManifest from_json(std::string_view text);
  /// FNV-1a 64 over the reproducibility-relevant fields (not the paths).
  [[nodiscard]] std::string digest() const;
};

std::string write_scan_csv(const ScanHistogram& hist, const RunManifest& manifest);
ScanHistogram parse_scan_csv(std::string_view text);

/// One line of the reproduction table: a computed value against the digits
/// printed in the source material.
struct RegressionRow {
  std::string name;
  std::string unit;
  double computed;
  std::string printed;
  bool ok;
};

std::vector<RegressionRow> paper_regression_rows(const PhysicalConstants& k);

/// Prints the table; returns 0 iff every row matches.
int cmd_reproduce_paper(const PhysicalConstants& k, std::ostream& out);

struct SimulateOptions {
  std::optional<std::filesystem::path> config_path;
  std::optional<bool> slit_b_present;
  std::optional<bool> lens_enabled;
  SlitInteraction slit_interaction = SlitInteraction::Redirect;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  double scan_min_mm = -0.5;
  double scan_max_mm = 3.0;
  double scan_step_mm = 0.05;
  unsigned workers = 0;
  std::filesystem::path out = "scan.csv";
};

/// Manifest path written next to a CSV.
std::filesystem::path manifest_path_for(const std::filesystem::path& csv);

/// Runs a manifest and writes its CSV and manifest files.
ScanHistogram execute_manifest(const RunManifest& manifest, unsigned workers = 0);

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);

struct AnalyzeOptions {
  std::filesystem::path csv;
  std::optional<std::filesystem::path> config_path;
};

int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& err);

/// Re-runs a manifest; `out` overrides the recorded CSV path.
int cmd_replay(const std::filesystem::path& manifest, std::optional<std::filesystem::path> out,
               std::ostream& log, std::ostream& err);

} // namespace popper::cli
