#include "popper/histogram.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "popper/decimal.hpp"
#include "popper/units.hpp"

namespace popper {

std::string_view to_string(Profile p) noexcept {
  return p == Profile::Coincidence ? "coincidence" : "singles";
}

void ScanHistogram::validate() const {
  if (coincidence.size() != positions.size() || singles.size() != positions.size())
    throw std::invalid_argument("histogram columns have unequal lengths");
  for (std::size_t i = 1; i < positions.size(); ++i)
    if (!(positions[i] > positions[i - 1]))
      throw std::invalid_argument("histogram positions must be strictly increasing");
  for (std::size_t i = 0; i < positions.size(); ++i)
    if (coincidence[i] > trials_per_position || singles[i] > trials_per_position)
      throw std::invalid_argument("histogram count exceeds trials per position");
}

std::vector<double> make_scan_grid(double min_mm, double max_mm, double step_mm) {
  if (!(step_mm > 0.0) || !std::isfinite(step_mm) || !std::isfinite(min_mm) || !std::isfinite(max_mm))
    throw std::invalid_argument("scan step must be positive and bounds finite");
  if (max_mm < min_mm) throw std::invalid_argument("scan max is below scan min");
  const auto n = static_cast<std::size_t>(std::floor((max_mm - min_mm) / step_mm + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mm = min_mm + static_cast<double>(i) * step_mm;
    // Nine decimals absorbs the accumulated binary error of the step.
    const auto text = fmt::format("{:.9f}", mm);
    grid.push_back(*decimal::parse_scaled(text, units::millimetre_exp) + 0.0);
  }
  return grid;
}

} // namespace popper
