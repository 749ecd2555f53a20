#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace scg {

// Exact arithmetic for instance data and equilibrium decisions. Expression
// templates are off so the type behaves like a plain value in generic code.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

// Accepts integers, "p/q" fractions and decimal literals with an optional
// exponent ("0.6", "-1.25e-3"). Throws scg::Error(kParseError).
Rational parse_rational(std::string_view text);

// Canonical text: "p" for integers, otherwise "p/q" in lowest terms.
std::string format_rational(const Rational& value);

// Shortest decimal text that round-trips the double.
std::string format_double(double value);

// Parses the same grammar as parse_rational and rounds to nearest double.
double parse_probability(std::string_view text);

inline double to_double(const Rational& value) { return value.convert_to<double>(); }
inline double to_double(double value) { return value; }

// Comparison policy per scalar type: exact for Rational, absolute tolerance
// kFloatTolerance for double.
inline constexpr double kFloatTolerance = 1e-9;

template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool kExact = true;
  static Rational tolerance() { return Rational(0); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool kExact = false;
  static double tolerance() { return kFloatTolerance; }
};

template <typename T>
bool approx_leq(const T& a, const T& b) {
  if constexpr (ScalarTraits<T>::kExact) {
    return a <= b;
  } else {
    return a <= b + ScalarTraits<T>::tolerance();
  }
}

template <typename T>
bool definitely_less(const T& a, const T& b) {
  return !approx_leq(b, a);
}

template <typename T>
bool approx_equal(const T& a, const T& b) {
  return approx_leq(a, b) && approx_leq(b, a);
}

template <typename T>
T from_rational(const Rational& value) {
  if constexpr (std::is_same_v<T, Rational>) {
    return value;
  } else {
    return to_double(value);
  }
}

}  // namespace scg
