#include "popper/diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace popper {

void DiffractionGeometry::validate() const {
  auto ok = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!ok(slit_width) || !ok(wavelength) || !ok(screen_distance))
    throw std::invalid_argument("diffraction geometry requires positive finite s, lambda and D");
}

bool DiffractionGeometry::paraxial() const noexcept {
  return 10.0 * wavelength < slit_width && 10.0 * slit_width < screen_distance;
}

double DiffractionGeometry::beta(double y) const noexcept {
  return std::numbers::pi * slit_width * y / (wavelength * screen_distance);
}

double relative_intensity(const DiffractionGeometry& geom, double y) {
  geom.validate();
  const double b = geom.beta(y);
  if (std::abs(b) < 1e-4) {
    // sin(b)/b = 1 - b^2/6 + O(b^4)
    const double sinc = 1.0 - b * b / 6.0;
    return sinc * sinc;
  }
  const double sinc = std::sin(b) / b;
  return sinc * sinc;
}

double first_minimum(const DiffractionGeometry& geom) {
  geom.validate();
  return geom.wavelength * geom.screen_distance / geom.slit_width;
}

double uncertainty_form(const DiffractionGeometry& geom, double photon_momentum) {
  if (!(photon_momentum > 0.0))
    throw std::domain_error("photon momentum must be positive");
  return first_minimum(geom) * photon_momentum;
}

double path_length(double axial_distance, double y) {
  if (axial_distance < 0.0)
    throw std::domain_error("axial distance must be non-negative");
  return std::hypot(axial_distance, y);
}

DiffractionSampler::DiffractionSampler(const DiffractionGeometry& geom,
                                       std::size_t truncation_lobes,
                                       std::size_t grid_intervals)
    : geom_(geom), lobes_(truncation_lobes), half_window_(0.0) {
  geom_.validate();
  if (lobes_ < 1)
    throw std::invalid_argument("sampler needs at least one lobe per side");
  if (grid_intervals < 1024)
    throw std::invalid_argument("sampler needs at least 1024 grid points");
  // Even interval count puts a node exactly on y = 0.
  const std::size_t intervals = grid_intervals + (grid_intervals % 2);
  half_window_ = static_cast<double>(lobes_) * first_minimum(geom_);

  const std::size_t n = intervals + 1;
  const std::size_t mid = intervals / 2;
  const double step = 2.0 * half_window_ / static_cast<double>(intervals);
  nodes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<double>(i) - static_cast<double>(mid);
    nodes_[i] = k * step;
  }

  cdf_.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double a = nodes_[i - 1];
    const double b = nodes_[i];
    const double cell = (b - a) / 6.0 *
        (relative_intensity(geom_, a) + 4.0 * relative_intensity(geom_, 0.5 * (a + b)) +
         relative_intensity(geom_, b));
    cdf_[i] = cdf_[i - 1] + cell;
  }
  const double total = cdf_.back();
  if (!(total > 0.0))
    throw std::invalid_argument("degenerate diffraction geometry");
  for (auto& c : cdf_) c /= total;

  // Exact mirror symmetry of the table.
  for (std::size_t i = 0; i < mid; ++i) {
    const double lo = 0.5 * (cdf_[i] + (1.0 - cdf_[n - 1 - i]));
    cdf_[i] = lo;
    cdf_[n - 1 - i] = 1.0 - lo;
  }
  cdf_.front() = 0.0;
  cdf_[mid] = 0.5;
  cdf_.back() = 1.0;

  for (std::size_t i = 1; i < n; ++i) {
    if (!(cdf_[i] > cdf_[i - 1]))
      throw std::invalid_argument("tabulated CDF is not strictly increasing; refine the grid");
  }
}

double DiffractionSampler::cdf(double y) const noexcept {
  if (y <= nodes_.front()) return 0.0;
  if (y >= nodes_.back()) return 1.0;
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), y);
  const auto i = static_cast<std::size_t>(it - nodes_.begin());
  const double t = (y - nodes_[i - 1]) / (nodes_[i] - nodes_[i - 1]);
  return cdf_[i - 1] + t * (cdf_[i] - cdf_[i - 1]);
}

double DiffractionSampler::sample(double u) const noexcept {
  if (u <= 0.0) return nodes_.front();
  if (u >= 1.0) return nodes_.back();
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  const auto i = static_cast<std::size_t>(it - cdf_.begin());
  if (cdf_[i] == u) return nodes_[i];
  const double t = (u - cdf_[i - 1]) / (cdf_[i] - cdf_[i - 1]);
  return nodes_[i - 1] + t * (nodes_[i] - nodes_[i - 1]);
}

DiffractionSampler build_sampler(const DiffractionGeometry& geom, std::size_t truncation_lobes,
                                 std::size_t grid_points) {
  return DiffractionSampler(geom, truncation_lobes, grid_points);
}

} // namespace popper
