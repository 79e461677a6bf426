#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cfmm {

using Rational = boost::multiprecision::cpp_rational;
using RationalVector = std::vector<Rational>;

/// Parses "7", "-3/4", "0.125" or "1.5e-3" exactly. Throws SpecError on junk.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string format_rational(const Rational& value);

/// Exact binary value of a finite double.
Rational to_rational(double value);

double to_double(const Rational& value);

RationalVector to_rational(std::span<const double> values);
std::vector<double> to_double(std::span<const Rational> values);

}  // namespace cfmm
