#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace hbl {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;

/// Canonical "p/q" rendering; integers render without a denominator.
std::string toString(const Rational& value);

/// Parses "p", "p/q" or a finite decimal such as "0.25". Throws std::invalid_argument.
Rational parseRational(std::string_view text);

/// Decimal rendering with at most `digits` significant digits, trailing zeros trimmed.
std::string toDecimal(const Rational& value, int digits = 12);

/// floor(base^exponent) for base >= 0 and exponent = p/q >= 0, computed as floor((base^p)^(1/q)).
Integer floorPow(const Integer& base, const Rational& exponent);

Rational sum(const std::vector<Rational>& values);

}  // namespace hbl
