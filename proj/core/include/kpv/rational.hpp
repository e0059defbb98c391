#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

namespace kpv {

/// Exact rational number in canonical form: denominator > 0 and
/// gcd(|num|, den) == 1 after every operation.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(int v) : q_(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
  /// Throws DivisionByZero if `den == 0`.
  Rational(long num, long den);
  Rational(const mpz_class& num, const mpz_class& den);
  explicit Rational(const mpq_class& q);

  /// Parses "a" or "a/b" (decimal integers).
  static Rational parse(const std::string& text);

  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }
  const mpq_class& raw() const { return q_; }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }
  double to_double() const { return q_.get_d(); }

  /// "num/den", or just "num" when the denominator is 1.
  std::string str() const;

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  /// Throws DivisionByZero.
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class q_{0};
};

Rational abs(const Rational& r);
/// Integer power; negative exponents invert (DivisionByZero on 0).
Rational pow(const Rational& base, long exponent);
/// Exact square root when `r` is the square of a rational, otherwise false.
bool exact_sqrt(const Rational& r, Rational& root);

}  // namespace kpv
