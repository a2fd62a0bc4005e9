#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace popper {

enum class Profile { Coincidence, Singles };

std::string_view to_string(Profile p) noexcept;

/// Counts versus D2 centre position for one scan.
struct ScanHistogram {
  std::vector<double> positions; ///< metres, strictly increasing
  std::vector<std::uint64_t> coincidence;
  std::vector<std::uint64_t> singles;
  std::uint64_t trials_per_position = 0;
  std::uint64_t seed = 0;

  [[nodiscard]] std::size_t size() const noexcept { return positions.size(); }
  [[nodiscard]] const std::vector<std::uint64_t>& counts(Profile p) const noexcept {
    return p == Profile::Coincidence ? coincidence : singles;
  }
  /// Throws std::invalid_argument on unequal lengths, unordered positions or
  /// counts above the trial count.
  void validate() const;

  friend bool operator==(const ScanHistogram&, const ScanHistogram&) = default;
};

/// Grid min, min + step, ... up to max (inclusive within 1e-9 of a step),
/// built in millimetre text so the values are the correctly rounded decimals.
std::vector<double> make_scan_grid(double min_mm, double max_mm, double step_mm);

} // namespace popper
