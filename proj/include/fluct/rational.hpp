#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace fluct {

using Rational = mpq_class;
using BigInt = mpz_class;

// Parses "p/q", "p" or a finite decimal such as "-0.25" into a canonical rational.
Rational parse_rational(std::string_view text);

// Canonical "p/q" form, or "p" for integers.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

// num / den in canonical form.
Rational ratio(const BigInt& num, const BigInt& den);

BigInt lcm(const BigInt& a, const BigInt& b);

}  // namespace fluct
