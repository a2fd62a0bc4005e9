#include "popper/apparatus.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "popper/decimal.hpp"

namespace popper {

namespace {

enum class Kind { Length, Wavelength, Angle, Flag };

struct KeySpec {
  std::string_view name;
  Kind kind;
  double ApparatusConfig::*number = nullptr;
  bool ApparatusConfig::*flag = nullptr;
};

int unit_exp(Kind k) {
  switch (k) {
  case Kind::Length: return units::millimetre_exp;
  case Kind::Wavelength: return units::nanometre_exp;
  case Kind::Angle: return units::milliradian_exp;
  case Kind::Flag: break;
  }
  return 0;
}

// File order of the keys.
const std::array<KeySpec, 16> kKeys{{
    {"photon_wavelength_nm", Kind::Wavelength, &ApparatusConfig::photon_wavelength},
    {"pump_wavelength_nm", Kind::Wavelength, &ApparatusConfig::pump_wavelength},
    {"slit_a_width_mm", Kind::Length, &ApparatusConfig::slit_a_width},
    {"slit_b_width_mm", Kind::Length, &ApparatusConfig::slit_b_width},
    {"slit_b_present", Kind::Flag, nullptr, &ApparatusConfig::slit_b_present},
    {"detector_diameter_mm", Kind::Length, &ApparatusConfig::detector_diameter},
    {"dist_source_slit_a_mm", Kind::Length, &ApparatusConfig::dist_source_to_slit_a},
    {"dist_source_slit_b_mm", Kind::Length, &ApparatusConfig::dist_source_to_slit_b_plane},
    {"dist_slit_b_d2_mm", Kind::Length, &ApparatusConfig::dist_slit_b_to_d2},
    {"lens_enabled", Kind::Flag, nullptr, &ApparatusConfig::lens_enabled},
    {"lens_focal_mm", Kind::Length, &ApparatusConfig::lens_focal},
    {"lens_to_slit_a_mm", Kind::Length, &ApparatusConfig::lens_to_slit_a},
    {"source_diameter_mm", Kind::Length, &ApparatusConfig::source_diameter},
    {"source_length_mm", Kind::Length, &ApparatusConfig::source_length},
    {"beam_half_divergence_mrad", Kind::Angle, &ApparatusConfig::beam_half_divergence},
    {"momentum_jitter_mrad", Kind::Angle, &ApparatusConfig::momentum_jitter},
}};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void require_positive(double v, std::string_view key) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ConfigValidationError(std::string(key), "must be positive");
}

void require_non_negative(double v, std::string_view key) {
  if (!(v >= 0.0) || !std::isfinite(v))
    throw ConfigValidationError(std::string(key), "must be non-negative");
}

} // namespace

double apply_thin_lens(const ThinLens& lens, double y, double theta) {
  return theta - y / lens.focal_length;
}

ConfigParseError::ConfigParseError(std::size_t line, const std::string& what)
    : std::runtime_error(fmt::format("line {}: {}", line, what)), line_(line) {}

ConfigValidationError::ConfigValidationError(std::string key, const std::string& what)
    : std::runtime_error(fmt::format("{}: {}", key, what)), key_(std::move(key)) {}

void ApparatusConfig::validate() const {
  require_positive(photon_wavelength, "photon_wavelength_nm");
  require_positive(pump_wavelength, "pump_wavelength_nm");
  require_positive(slit_a_width, "slit_a_width_mm");
  require_positive(slit_b_width, "slit_b_width_mm");
  require_positive(detector_diameter, "detector_diameter_mm");
  require_positive(dist_source_to_slit_a, "dist_source_slit_a_mm");
  require_positive(dist_source_to_slit_b_plane, "dist_source_slit_b_mm");
  require_positive(dist_slit_b_to_d2, "dist_slit_b_d2_mm");
  require_positive(lens_focal, "lens_focal_mm");
  require_positive(lens_to_slit_a, "lens_to_slit_a_mm");
  require_positive(source_diameter, "source_diameter_mm");
  require_positive(source_length, "source_length_mm");
  require_non_negative(beam_half_divergence, "beam_half_divergence_mrad");
  require_non_negative(momentum_jitter, "momentum_jitter_mrad");
  if (!(slit_a_width < source_diameter))
    throw ConfigValidationError("slit_a_width_mm", "must be smaller than the source diameter");
  if (!(slit_b_width < source_diameter))
    throw ConfigValidationError("slit_b_width_mm", "must be smaller than the source diameter");
  if (lens_enabled && !(dist_source_to_slit_a >= lens_to_slit_a))
    throw ConfigValidationError("lens_to_slit_a_mm", "lens would sit behind the source");
}

ApparatusConfig parse_config(std::string_view text) {
  ApparatusConfig cfg;
  std::array<bool, kKeys.size()> seen{};
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigParseError(line_no, "expected `key = value`");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigParseError(line_no, "missing key");
    if (value.empty()) throw ConfigParseError(line_no, fmt::format("missing value for `{}`", key));

    std::size_t idx = 0;
    while (idx < kKeys.size() && kKeys[idx].name != key) ++idx;
    if (idx == kKeys.size()) throw ConfigParseError(line_no, fmt::format("unknown key `{}`", key));
    if (seen[idx]) throw ConfigParseError(line_no, fmt::format("duplicate key `{}`", key));
    seen[idx] = true;

    const KeySpec& spec = kKeys[idx];
    if (spec.kind == Kind::Flag) {
      if (value == "true") cfg.*spec.flag = true;
      else if (value == "false") cfg.*spec.flag = false;
      else throw ConfigParseError(line_no, fmt::format("`{}` expects true or false", key));
    } else {
      const auto v = decimal::parse_scaled(value, unit_exp(spec.kind));
      if (!v) throw ConfigParseError(line_no, fmt::format("`{}` is not a number", value));
      cfg.*spec.number = *v;
    }
  }
  cfg.validate();
  return cfg;
}

std::string serialize_config(const ApparatusConfig& cfg) {
  std::string out;
  for (const auto& spec : kKeys) {
    if (spec.kind == Kind::Flag)
      out += fmt::format("{} = {}\n", spec.name, cfg.*spec.flag ? "true" : "false");
    else
      out += fmt::format("{} = {}\n", spec.name, decimal::format_scaled(cfg.*spec.number, unit_exp(spec.kind)));
  }
  return out;
}

ApparatusConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open config file {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

} // namespace popper
