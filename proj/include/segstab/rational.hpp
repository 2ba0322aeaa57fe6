#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace segstab {

// All coordinates and LP values are exact rationals. No floating point
// enters any geometric predicate or solver, so equality tests are exact
// and every run is bit-reproducible.
using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

// Renders "p/q" in lowest terms, or just "p" when the denominator is 1.
inline std::string rat_to_string(const Rat& r) {
  const Int num = boost::multiprecision::numerator(r);
  const Int den = boost::multiprecision::denominator(r);
  std::string s = num.str();
  if (den != 1) {
    s += "/";
    s += den.str();
  }
  return s;
}

// Accepts "p", "-p", "p/q" with optional sign on p; q must be positive.
// Returns nullopt on any malformed input instead of throwing, so parsers
// can attach line context to the error themselves.
inline std::optional<Rat> rat_from_string(std::string_view text) {
  if (text.empty()) return std::nullopt;
  const auto slash = text.find('/');
  const auto is_int = [](std::string_view t, bool allow_sign) {
    if (t.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  // cpp_int's string constructor rejects a leading '+', so shed it here.
  const auto to_int = [](std::string_view t) {
    if (!t.empty() && t[0] == '+') t.remove_prefix(1);
    return Int(std::string(t));
  };
  try {
    if (slash == std::string_view::npos) {
      if (!is_int(text, true)) return std::nullopt;
      return Rat(to_int(text));
    }
    const std::string_view num = text.substr(0, slash);
    const std::string_view den = text.substr(slash + 1);
    if (!is_int(num, true) || !is_int(den, false)) return std::nullopt;
    const Int d = to_int(den);
    if (d == 0) return std::nullopt;
    return Rat(to_int(num), d);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace segstab
