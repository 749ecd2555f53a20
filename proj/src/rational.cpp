#include "scg/rational.hpp"

#include <cctype>
#include <charconv>
#include <system_error>

#include "scg/error.hpp"

namespace scg {
namespace {

using boost::multiprecision::mpz_int;

[[noreturn]] void fail(std::string_view text, const char* why) {
  throw Error(ErrorKind::kParseError,
              "cannot parse number '" + std::string(text) + "': " + why);
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Base-10 digits only; the string constructor would read a leading 0 as octal.
mpz_int decimal_integer(std::string_view digits) {
  const auto first = digits.find_first_not_of('0');
  if (first == std::string_view::npos) return 0;
  return mpz_int(std::string(digits.substr(first)));
}

mpz_int pow10(long exponent) {
  mpz_int result = 1;
  for (long i = 0; i < exponent; ++i) result *= 10;
  return result;
}

Rational parse_decimal(std::string_view text, std::string_view original) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    text = text.substr(0, e);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 3) fail(original, "bad exponent");
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
  }
  std::string_view int_part = text;
  std::string_view frac_part;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    int_part = text.substr(0, dot);
    frac_part = text.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) fail(original, "no digits");
  if (!int_part.empty() && !all_digits(int_part)) fail(original, "bad digits");
  if (!frac_part.empty() && !all_digits(frac_part)) fail(original, "bad digits");

  std::string digits = std::string(int_part) + std::string(frac_part);
  mpz_int numerator = decimal_integer(digits);
  exponent -= static_cast<long>(frac_part.size());
  Rational value;
  if (exponent >= 0) {
    value = Rational(mpz_int(numerator * pow10(exponent)));
  } else {
    value = Rational(numerator, pow10(-exponent));
  }
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view original = text;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) fail(original, "empty");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    bool negative = false;
    if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
      negative = num.front() == '-';
      num.remove_prefix(1);
    }
    if (!all_digits(num) || !all_digits(den)) fail(original, "bad fraction");
    mpz_int d = decimal_integer(den);
    if (d == 0) fail(original, "zero denominator");
    Rational value(decimal_integer(num), d);
    return negative ? Rational(-value) : value;
  }
  return parse_decimal(text, original);
}

std::string format_rational(const Rational& value) {
  mpz_int num = boost::multiprecision::numerator(value);
  mpz_int den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string format_double(double value) {
  char buffer[64];
  auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

double parse_probability(std::string_view text) {
  return to_double(parse_rational(text));
}

}  // namespace scg
