#pragma once

// Deterministic, locale-independent number formatting shared by the CSV,
// plot and report writers. Everything here is a pure function of its inputs.

#include <array>
#include <charconv>
#include <cmath>
#include <string>

namespace cstrig {

// Fixed decimal notation with '.' separator.
inline std::string fmt_fixed(double v, int decimals) {
  std::array<char, 64> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                           std::chars_format::fixed, decimals);
  return std::string(buf.data(), res.ptr);
}

// Shortest round-trippable representation.
inline std::string fmt_shortest(double v) {
  std::array<char, 64> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

// Scientific notation with two significant digits ("2.2e-30"). When p has
// underflowed to zero, the value is reconstructed from its log10 so extreme
// tail probabilities still print faithfully.
inline std::string fmt_p_value(double p, double log10_p) {
  if (p > 0.0) {
    std::array<char, 64> buf;
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), p,
                             std::chars_format::scientific, 1);
    return std::string(buf.data(), res.ptr);
  }
  if (log10_p == 0.0) return "1.0e+00";
  double exponent = std::floor(log10_p);
  double mantissa = std::pow(10.0, log10_p - exponent);
  // keep the mantissa in [1, 10) after rounding to one decimal
  if (mantissa >= 9.95) {
    mantissa = 1.0;
    exponent += 1.0;
  }
  const int e = static_cast<int>(exponent);
  std::string out = fmt_fixed(mantissa, 1);
  out += 'e';
  out += e < 0 ? '-' : '+';
  std::string mag = std::to_string(e < 0 ? -e : e);
  if (mag.size() < 2) mag.insert(mag.begin(), '0');
  out += mag;
  return out;
}

}  // namespace cstrig
