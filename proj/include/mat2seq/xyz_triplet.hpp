#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <string>
#include <string_view>

#include "mat2seq/core.hpp"

namespace mat2seq {

/// Parses an operation such as "-y+1/2, x, z+0.25" into (W, t). Each
/// component is a sum of terms: [+-][k]x|y|z, rational constants p/q or
/// decimals. Translation is wrapped into [0, 1).
inline SymmetryOperation parse_xyz_triplet(std::string_view text) {
  SymmetryOperation op;
  op.rotation.setZero();
  op.translation.setZero();
  const auto fail = [&](const std::string& why) -> SymmetryOperation {
    throw Error(ErrorCode::MalformedTriplet, why + " in '" + std::string(text) + "'");
  };

  int row = 0;
  std::size_t i = 0;
  bool row_has_term = false;
  while (i <= text.size()) {
    if (i == text.size() || text[i] == ',') {
      if (!row_has_term) return fail("empty component");
      ++row;
      ++i;
      row_has_term = false;
      if (row > 3) return fail("more than three components");
      if (i > text.size()) break;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    if (row >= 3) return fail("more than three components");
    int sign = 1;
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    }
    // Numeric prefix: integer, decimal, or p/q.
    std::size_t start = i;
    while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) ++i;
    double value = 1.0;
    bool has_number = i > start;
    if (has_number) {
      value = std::strtod(std::string(text.substr(start, i - start)).c_str(), nullptr);
      if (i < text.size() && text[i] == '/') {
        ++i;
        std::size_t dstart = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == dstart) return fail("missing denominator");
        const double denom = std::strtod(std::string(text.substr(dstart, i - dstart)).c_str(), nullptr);
        if (denom == 0) return fail("zero denominator");
        value /= denom;
      }
    }
    while (i < text.size() && (text[i] == '*' || std::isspace(static_cast<unsigned char>(text[i])))) ++i;
    const char axis = i < text.size() ? static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))) : '\0';
    if (axis == 'x' || axis == 'y' || axis == 'z') {
      const double coeff = sign * value;
      if (std::abs(coeff - std::round(coeff)) > 1e-9) return fail("non-integer coefficient");
      op.rotation(row, axis - 'x') += static_cast<int>(std::lround(coeff));
      ++i;
    } else if (has_number) {
      op.translation(row) += sign * value;
    } else {
      return fail("unexpected character");
    }
    row_has_term = true;
  }
  if (row != 3) return fail("expected three components");
  const int det = op.rotation.determinant();
  if (det != 1 && det != -1) return fail("rotation part is not unimodular");
  op.translation = wrap_unit(op.translation);
  return op;
}

namespace detail {

/// Renders t in [0,1) as the reduced fraction k/12 when within 1e-4 of one,
/// else as a 4-decimal number. Empty string for zero.
inline std::string format_translation(double t) {
  t = wrap_unit(t);
  const double twelfths = t * 12.0;
  const long k = std::lround(twelfths);
  if (std::abs(twelfths - k) * (1.0 / 12.0) < 1e-4) {
    const long kk = k % 12;
    if (kk == 0) return {};
    const long g = std::gcd(kk, 12L);
    return std::to_string(kk / g) + "/" + std::to_string(12 / g);
  }
  // Round half-up on the decimal grid.
  const int ticks = frac_ticks(t);
  if (ticks == 0) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "0.%04d", ticks);
  return buf;
}

}  // namespace detail

/// Formats an operation as "-x,y+1/2,-z".
inline std::string format_xyz_triplet(const SymmetryOperation& op) {
  std::string out;
  for (int r = 0; r < 3; ++r) {
    if (r) out += ',';
    bool first = true;
    for (int c = 0; c < 3; ++c) {
      const int coeff = op.rotation(r, c);
      if (coeff == 0) continue;
      if (coeff < 0) {
        out += '-';
      } else if (!first) {
        out += '+';
      }
      if (std::abs(coeff) != 1) out += std::to_string(std::abs(coeff));
      out += static_cast<char>('x' + c);
      first = false;
    }
    const std::string t = detail::format_translation(op.translation(r));
    if (!t.empty()) out += "+" + t;
  }
  return out;
}

}  // namespace mat2seq
