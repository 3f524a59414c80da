#include "fluct/rational.hpp"

#include <string>

#include "fluct/error.hpp"

namespace fluct {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto first = s.find_first_not_of(" \t");
  auto last = s.find_last_not_of(" \t");
  if (first == std::string::npos) throw ParameterError("empty rational literal");
  s = s.substr(first, last - first + 1);

  Rational out;
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) throw ParameterError("malformed rational: " + s);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t decimals = s.size() - dot - 1;
    BigInt num;
    if (num.set_str(digits, 10) != 0) throw ParameterError("malformed rational: " + s);
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, decimals);
    out = Rational(num, den);
  } else {
    if (out.set_str(s, 10) != 0) throw ParameterError("malformed rational: " + s);
    if (out.get_den() == 0) throw ParameterError("zero denominator: " + s);
  }
  out.canonicalize();
  return out;
}

std::string to_string(const Rational& value) {
  Rational v = value;
  v.canonicalize();
  return v.get_str(10);
}

Rational ratio(const BigInt& num, const BigInt& den) {
  if (den == 0) throw ParameterError("zero denominator");
  Rational out(num, den);
  out.canonicalize();
  return out;
}

double to_double(const Rational& value) { return value.get_d(); }

BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

}  // namespace fluct
