#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <string>
#include <string_view>

namespace compatlab::exact {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q", "p", or a plain decimal such as "-0.125" into an exact rational.
Rational parse_rational(std::string_view text);

/// Renders as "p/q" (always with a denominator, "0/1" for zero).
std::string render_rational(const Rational& q);

/// Arithmetic-mode policy. Rational mode compares exactly; float mode uses
/// an absolute tolerance of 1e-9 for every zero test.
template <class Num>
struct NumTraits;

template <>
struct NumTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "rational";
  static bool negligible(const Rational& x) { return x == 0; }
  static Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }
  static std::string render(const Rational& x) { return render_rational(x); }
  static Rational parse(std::string_view s) { return parse_rational(s); }
  static Rational from_int(long long v) { return Rational(v); }
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
};

template <>
struct NumTraits<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
  static constexpr double tolerance = 1e-9;
  static bool negligible(double x) { return std::abs(x) <= tolerance; }
  static double abs(double x) { return std::abs(x); }
  static std::string render(double x);
  static double parse(std::string_view s);
  static double from_int(long long v) { return static_cast<double>(v); }
  static double to_double(double x) { return x; }
};

}  // namespace compatlab::exact
