#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace popper::decimal {

/// Shortest round-trip text of `si / 10^unit_exp`, produced by shifting the
/// decimal exponent of the shortest representation of `si` (no binary
/// multiplication is involved). `parse_scaled(format_scaled(x, e), e) == x`
/// holds bit-exactly for every finite x.
std::string format_scaled(double si, int unit_exp);

/// Parses a decimal number written in units of 10^unit_exp and returns the
/// correctly rounded SI value. Returns nullopt on anything that is not a
/// plain finite decimal literal.
std::optional<double> parse_scaled(std::string_view text, int unit_exp);

} // namespace popper::decimal

namespace popper::decimal {

/// Value of one unit in the last digit of a printed decimal literal, e.g.
/// 1e-24 for "2.82893e-19" and 0.01 for "0.41". Nullopt for non-numbers.
std::optional<double> last_digit_unit(std::string_view printed);

/// True when `value` lies within `units` last-digit units of `printed`.
bool matches_printed(double value, std::string_view printed, double units = 5.0);

} // namespace popper::decimal
