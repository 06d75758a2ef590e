#include "hbl/integer.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hbl {

std::string toString(const Rational& value) {
  // mpq_class::get_str already omits "/1" for canonical integers.
  return value.get_str();
}

Rational parseRational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (negative || (!whole.empty() && whole[0] == '+')) whole = whole.substr(1);
    if (whole.empty()) whole = "0";
    if (frac.empty()) frac = "0";
    for (char c : whole + frac) {
      if (c < '0' || c > '9') throw std::invalid_argument("malformed decimal: " + s);
    }
    Integer numerator(whole + frac);
    Integer denominator;
    mpz_ui_pow_ui(denominator.get_mpz_t(), 10, frac.size());
    Rational r(numerator, denominator);
    r.canonicalize();
    return negative ? Rational(-r) : r;
  }
  Rational r;
  if (r.set_str(s, 10) != 0 || r.get_den() == 0) {
    throw std::invalid_argument("malformed rational: " + s);
  }
  r.canonicalize();
  return r;
}

std::string toDecimal(const Rational& value, int digits) {
  if (value.get_den() == 1) return value.get_num().get_str();
  mpf_class f(value, 256);
  // %g trims trailing zeros.
  std::vector<char> buf(static_cast<size_t>(digits) + 64);
  gmp_snprintf(buf.data(), buf.size(), "%.*Fg", digits, f.get_mpf_t());
  return std::string(buf.data());
}

Integer floorPow(const Integer& base, const Rational& exponent) {
  if (base < 0) throw std::invalid_argument("floorPow: negative base");
  if (exponent < 0) throw std::invalid_argument("floorPow: negative exponent");
  const Integer& p = exponent.get_num();
  const Integer& q = exponent.get_den();
  if (!p.fits_ulong_p() || !q.fits_ulong_p()) {
    throw std::invalid_argument("floorPow: exponent too large");
  }
  Integer power;
  mpz_pow_ui(power.get_mpz_t(), base.get_mpz_t(), p.get_ui());
  Integer root;
  mpz_root(root.get_mpz_t(), power.get_mpz_t(), q.get_ui());
  return root;
}

Rational sum(const std::vector<Rational>& values) {
  Rational total = 0;
  for (const auto& v : values) total += v;
  return total;
}

}  // namespace hbl
