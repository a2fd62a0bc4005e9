#include "popper/decimal.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <string>

namespace popper::decimal {

namespace {

struct Scientific {
  bool negative = false;
  std::string digits; // no leading zeros, at least one digit
  int exponent = 0;   // value = d.ddd * 10^exponent
};

Scientific decompose(double x) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::scientific);
  std::string_view s(buf.data(), static_cast<std::size_t>(end - buf.data()));
  Scientific out;
  if (!s.empty() && s.front() == '-') {
    out.negative = true;
    s.remove_prefix(1);
  }
  const auto e = s.find('e');
  for (char ch : s.substr(0, e))
    if (ch != '.') out.digits.push_back(ch);
  std::from_chars(s.data() + e + 1 + (s[e + 1] == '+' ? 1 : 0), s.data() + s.size(), out.exponent);
  return out;
}

} // namespace

std::string format_scaled(double si, int unit_exp) {
  if (!std::isfinite(si)) return std::to_string(si);
  if (si == 0.0) return std::signbit(si) ? "-0" : "0";
  Scientific sc = decompose(si);
  const int exp = sc.exponent - unit_exp;
  const int ndig = static_cast<int>(sc.digits.size());
  std::string out = sc.negative ? "-" : "";
  if (exp >= 0 && exp < 21) {
    if (ndig <= exp + 1) {
      out += sc.digits;
      out.append(static_cast<std::size_t>(exp + 1 - ndig), '0');
    } else {
      out += sc.digits.substr(0, static_cast<std::size_t>(exp + 1));
      out += '.';
      out += sc.digits.substr(static_cast<std::size_t>(exp + 1));
    }
  } else if (exp < 0 && exp >= -6) {
    out += "0.";
    out.append(static_cast<std::size_t>(-exp - 1), '0');
    out += sc.digits;
  } else {
    out += sc.digits.substr(0, 1);
    if (ndig > 1) {
      out += '.';
      out += sc.digits.substr(1);
    }
    out += 'e';
    out += std::to_string(exp);
  }
  return out;
}

std::optional<double> parse_scaled(std::string_view text, int unit_exp) {
  if (text.empty()) return std::nullopt;
  // Validate as a plain decimal literal first.
  double probe = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, probe, std::chars_format::general);
  if (ec != std::errc() || ptr != last || !std::isfinite(probe)) return std::nullopt;

  std::string_view body(first, static_cast<std::size_t>(last - first));
  long long exp = 0;
  const auto epos = body.find_first_of("eE");
  std::string_view mantissa = body.substr(0, epos);
  if (epos != std::string_view::npos) {
    std::string_view es = body.substr(epos + 1);
    if (!es.empty() && es.front() == '+') es.remove_prefix(1);
    auto [p, e2] = std::from_chars(es.data(), es.data() + es.size(), exp);
    if (e2 != std::errc() || p != es.data() + es.size()) return std::nullopt;
  }
  std::string shifted(mantissa);
  shifted += 'e';
  shifted += std::to_string(exp + unit_exp);
  double value = 0.0;
  auto [p2, e3] = std::from_chars(shifted.data(), shifted.data() + shifted.size(), value);
  if (e3 != std::errc() || p2 != shifted.data() + shifted.size() || !std::isfinite(value))
    return std::nullopt;
  return value;
}

} // namespace popper::decimal

namespace popper::decimal {

std::optional<double> last_digit_unit(std::string_view printed) {
  if (!parse_scaled(printed, 0)) return std::nullopt;
  const auto epos = printed.find_first_of("eE");
  const std::string_view mantissa = printed.substr(0, epos);
  long long exp = 0;
  if (epos != std::string_view::npos) {
    std::string_view es = printed.substr(epos + 1);
    if (!es.empty() && es.front() == '+') es.remove_prefix(1);
    std::from_chars(es.data(), es.data() + es.size(), exp);
  }
  const auto dot = mantissa.find('.');
  const long long decimals =
      dot == std::string_view::npos ? 0 : static_cast<long long>(mantissa.size() - dot - 1);
  return parse_scaled("1", static_cast<int>(exp - decimals));
}

bool matches_printed(double value, std::string_view printed, double units) {
  const auto target = parse_scaled(printed, 0);
  const auto unit = last_digit_unit(printed);
  if (!target || !unit) return false;
  return std::abs(value - *target) <= units * *unit;
}

} // namespace popper::decimal
