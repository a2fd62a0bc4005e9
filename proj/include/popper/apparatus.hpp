#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "popper/units.hpp"

namespace popper {

/// An aperture on one arm, positioned on the unfolded optical axis measured
/// from the source.
struct SlitElement {
  double axial_position;
  double width;
  bool present = true;
};

struct ThinLens {
  double axial_position;
  double focal_length;
};

/// Paraxial thin-lens refraction: the ray keeps its height and its angle
/// becomes theta - y / f.
double apply_thin_lens(const ThinLens& lens, double y, double theta);

/// Geometry of the two-arm setup, SI units. Defaults are the published
/// apparatus values, written as decimal literals so that a config file
/// spelling them out in mm/nm/mrad parses to identical doubles.
///
/// Arm A: source -> (lens) -> slit A -> D1 (collects everything that passes).
/// Arm B: source -> slit-B plane -> D2, which scans along y.
struct ApparatusConfig {
  double photon_wavelength = 702.2e-9;
  double pump_wavelength = 351.1e-9; // informational only
  double slit_a_width = 0.16e-3;
  double slit_b_width = 0.16e-3;
  bool slit_b_present = true;
  double detector_diameter = 0.18e-3;
  double dist_source_to_slit_a = 1.255;
  double dist_source_to_slit_b_plane = 1.245;
  double dist_slit_b_to_d2 = 0.5;
  bool lens_enabled = true;
  double lens_focal = 0.5;
  double lens_to_slit_a = 1.0;
  double source_diameter = 3.0e-3;
  double source_length = 3.0e-3; // not used by the transverse model
  double beam_half_divergence = 2.0e-3;
  double momentum_jitter = 0.0;

  /// Throws ConfigValidationError naming the first offending key.
  void validate() const;

  [[nodiscard]] SlitElement slit_a() const { return {dist_source_to_slit_a, slit_a_width, true}; }
  [[nodiscard]] SlitElement slit_b() const {
    return {dist_source_to_slit_b_plane, slit_b_width, slit_b_present};
  }
  [[nodiscard]] ThinLens lens() const {
    return {dist_source_to_slit_a - lens_to_slit_a, lens_focal};
  }
  [[nodiscard]] double d2_axial_position() const {
    return dist_source_to_slit_b_plane + dist_slit_b_to_d2;
  }

  friend bool operator==(const ApparatusConfig&, const ApparatusConfig&) = default;
};

/// Malformed line in a config document.
class ConfigParseError : public std::runtime_error {
public:
  ConfigParseError(std::size_t line, const std::string& what);
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Well-formed document whose values break an invariant.
class ConfigValidationError : public std::runtime_error {
public:
  ConfigValidationError(std::string key, const std::string& what);
  [[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

/// Parses a `key = value` document (`#` starts a comment). Absent keys keep
/// their defaults, unknown keys are rejected. Lengths are millimetres,
/// wavelengths nanometres and angles milliradians, as the key names say.
ApparatusConfig parse_config(std::string_view text);

/// Inverse of parse_config; every key is written.
std::string serialize_config(const ApparatusConfig& cfg);

ApparatusConfig load_config(const std::filesystem::path& path);

} // namespace popper
