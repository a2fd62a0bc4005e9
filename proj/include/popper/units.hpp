#pragma once

// Everything inside the library is SI. These factors only appear where a
// value crosses an I/O boundary (config files, CSV, printed tables).
namespace popper::units {

inline constexpr double metre = 1.0;
inline constexpr double millimetre = 1e-3;
inline constexpr double nanometre = 1e-9;
inline constexpr double radian = 1.0;
inline constexpr double milliradian = 1e-3;

// Decimal exponents of the same factors, used for exact text conversion.
inline constexpr int millimetre_exp = -3;
inline constexpr int nanometre_exp = -9;
inline constexpr int milliradian_exp = -3;

} // namespace popper::units
