#include "kpv/rational.hpp"

#include "kpv/errors.hpp"

namespace kpv {

Rational::Rational(long num, long den) {
  if (den == 0) throw DivisionByZero("rational constructor");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (sgn(den) == 0) throw DivisionByZero("rational constructor");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational::Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(mpz_class(text), mpz_class(1));
    return Rational(mpz_class(text.substr(0, slash)), mpz_class(text.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw ParseError("not a rational: '" + text + "'");
  }
}

std::string Rational::str() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Rational& Rational::operator+=(const Rational& o) {
  q_ += o.q_;
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  q_ -= o.q_;
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  q_ *= o.q_;
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw DivisionByZero();
  q_ /= o.q_;
  return *this;
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

Rational pow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base.is_zero()) throw DivisionByZero("negative power of zero");
    return Rational(1) / pow(base, -exponent);
  }
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.numerator().get_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.denominator().get_mpz_t(), static_cast<unsigned long>(exponent));
  return Rational(num, den);
}

bool exact_sqrt(const Rational& r, Rational& root) {
  if (r.sign() < 0) return false;
  const mpz_class num = r.numerator();
  const mpz_class den = r.denominator();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return false;
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
  root = Rational(sn, sd);
  return true;
}

}  // namespace kpv
