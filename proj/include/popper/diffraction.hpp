#pragma once

#include <cstddef>
#include <vector>

namespace popper {

/// Single-slit far-field geometry: slit width s, wavelength, and distance D
/// from the slit screen to the observing plane. All metres.
struct DiffractionGeometry {
  double slit_width;
  double wavelength;
  double screen_distance;

  /// Throws std::invalid_argument unless every field is positive and finite.
  void validate() const;

  /// True when wavelength << slit_width << screen_distance (factor 10 each).
  [[nodiscard]] bool paraxial() const noexcept;

  /// Phase argument pi s y / (lambda D).
  [[nodiscard]] double beta(double y) const noexcept;
};

/// [sin(beta)/beta]^2 at transverse offset y in the observing plane.
double relative_intensity(const DiffractionGeometry& geom, double y);

/// lambda D / s.
double first_minimum(const DiffractionGeometry& geom);

/// y P at the first minimum, i.e. h D / s when P = h / lambda.
double uncertainty_form(const DiffractionGeometry& geom, double photon_momentum);

/// sqrt(D^2 + y^2).
double path_length(double axial_distance, double y);

/// Inverse-CDF sampler for the normalized single-slit intensity on the
/// window [-L, L], L = lobes * lambda D / s.
///
/// The CDF is tabulated on `grid_intervals + 1` equally spaced nodes (the
/// middle node sits exactly on y = 0) by Simpson's rule per cell, then
/// symmetrized so that cdf(-y) = 1 - cdf(y). Sampling inverts it by linear
/// interpolation, so a draw costs one binary search regardless of u.
///
/// Immutable after construction; concurrent sampling is safe.
class DiffractionSampler {
public:
  static constexpr std::size_t kDefaultLobes = 5;
  static constexpr std::size_t kDefaultGridIntervals = 8192;

  DiffractionSampler(const DiffractionGeometry& geom,
                     std::size_t truncation_lobes = kDefaultLobes,
                     std::size_t grid_intervals = kDefaultGridIntervals);

  [[nodiscard]] const DiffractionGeometry& geometry() const noexcept { return geom_; }
  [[nodiscard]] std::size_t truncation_lobes() const noexcept { return lobes_; }
  [[nodiscard]] double half_window() const noexcept { return half_window_; }

  /// Tabulated CDF, linearly interpolated; 0 below -L and 1 above +L.
  [[nodiscard]] double cdf(double y) const noexcept;

  /// Offset y in the observing plane for u in [0, 1).
  [[nodiscard]] double sample(double u) const noexcept;

  /// Paraxial deflection angle sample(u) / D.
  [[nodiscard]] double sample_angle(double u) const noexcept {
    return sample(u) / geom_.screen_distance;
  }

  [[nodiscard]] const std::vector<double>& nodes() const noexcept { return nodes_; }
  [[nodiscard]] const std::vector<double>& cdf_table() const noexcept { return cdf_; }

private:
  DiffractionGeometry geom_;
  std::size_t lobes_;
  double half_window_;
  std::vector<double> nodes_;
  std::vector<double> cdf_;
};

/// Throws std::invalid_argument for lobes < 1, grid_points < 1024 or a
/// degenerate geometry.
DiffractionSampler build_sampler(const DiffractionGeometry& geom,
                                 std::size_t truncation_lobes = DiffractionSampler::kDefaultLobes,
                                 std::size_t grid_points = DiffractionSampler::kDefaultGridIntervals);

inline double sample_deflection(const DiffractionSampler& sampler, double u) {
  return sampler.sample(u);
}

} // namespace popper
