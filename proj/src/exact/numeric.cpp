#include "compatlab/exact/numeric.hpp"

#include "compatlab/error.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace compatlab::exact {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// Base 10 always; the string constructor would read a leading zero as octal.
boost::multiprecision::cpp_int decimal_digits(std::string_view s) {
  boost::multiprecision::cpp_int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

boost::multiprecision::cpp_int parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw ConfigError("malformed integer '" + std::string(s) + "'");
  auto v = decimal_digits(s);
  return negative ? boost::multiprecision::cpp_int(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ConfigError("empty rational literal");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_integer(text.substr(0, slash));
    auto den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || (!frac.empty() && !all_digits(frac)))
      throw ConfigError("malformed decimal '" + std::string(text) + "'");
    boost::multiprecision::cpp_int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    auto digits = decimal_digits(std::string(whole) + std::string(frac));
    Rational r(digits, scale);
    return negative ? Rational(-r) : r;
  }
  return Rational(parse_integer(text));
}

std::string render_rational(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

std::string NumTraits<double>::render(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double NumTraits<double>::parse(std::string_view s) {
  if (s.find('/') != std::string_view::npos) return parse_rational(s).convert_to<double>();
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError("malformed number '" + std::string(s) + "'");
  return v;
}

}  // namespace compatlab::exact
