#include "cfmm/rational.hpp"

#include "cfmm/errors.hpp"

#include <cctype>
#include <cmath>

namespace cfmm {

namespace {

using boost::multiprecision::cpp_int;

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Base-10 digits only; cpp_int would read a leading zero as an octal prefix.
cpp_int decimal_int(std::string_view digits) {
  const auto first = digits.find_first_not_of('0');
  if (first == std::string_view::npos) return 0;
  return cpp_int(std::string(digits.substr(first)));
}

cpp_int pow10(long exponent) {
  cpp_int result = 1;
  for (long i = 0; i < exponent; ++i) result *= 10;
  return result;
}

Rational parse_decimal(std::string_view text) {
  bool negative = false;
  std::string_view s = text;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6) {
      throw SpecError("malformed exponent in number: " + std::string(text));
    }
    exponent = std::stol(std::string(exp_part));
    if (exp_negative) exponent = -exponent;
    s = s.substr(0, e);
  }

  std::string_view int_part = s;
  std::string_view frac_part;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) {
    throw SpecError("malformed number: " + std::string(text));
  }
  if ((!int_part.empty() && !all_digits(int_part)) ||
      (!frac_part.empty() && !all_digits(frac_part))) {
    throw SpecError("malformed number: " + std::string(text));
  }

  std::string digits(int_part);
  digits += frac_part;
  const cpp_int mantissa = decimal_int(digits);
  exponent -= static_cast<long>(frac_part.size());

  Rational value = exponent >= 0 ? Rational(mantissa * pow10(exponent))
                                 : Rational(mantissa, pow10(-exponent));
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  if (text.empty()) throw SpecError("empty number");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    std::string_view num_digits = num;
    if (!num_digits.empty() && (num_digits.front() == '-' || num_digits.front() == '+')) {
      num_digits.remove_prefix(1);
    }
    if (!all_digits(num_digits) || !all_digits(den)) {
      throw SpecError("malformed fraction: " + std::string(text));
    }
    const cpp_int d = decimal_int(den);
    if (d == 0) throw SpecError("zero denominator: " + std::string(text));
    cpp_int n = decimal_int(num_digits);
    if (!num.empty() && num.front() == '-') n = -n;
    return Rational(n, d);
  }
  return parse_decimal(text);
}

std::string format_rational(const Rational& value) {
  if (denominator(value) == 1) return numerator(value).str();
  return numerator(value).str() + "/" + denominator(value).str();
}

Rational to_rational(double value) {
  if (!std::isfinite(value)) throw DomainError("non-finite value has no rational form");
  return Rational(value);
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

RationalVector to_rational(std::span<const double> values) {
  RationalVector out;
  out.reserve(values.size());
  for (double v : values) out.push_back(to_rational(v));
  return out;
}

std::vector<double> to_double(std::span<const Rational> values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(to_double(v));
  return out;
}

}  // namespace cfmm
