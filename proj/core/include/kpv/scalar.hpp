#pragma once

#include <ostream>
#include <string>
#include <variant>

#include "kpv/rational.hpp"

namespace kpv {

enum class Mode { kExact, kFloat };

/// Either an exact Rational or a double. A computation stays in one mode;
/// combining the two throws ModeMismatch.
class Scalar {
 public:
  Scalar() : v_(Rational{}) {}
  Scalar(Rational r) : v_(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  Scalar(double d) : v_(d) {}               // NOLINT(google-explicit-constructor)
  Scalar(int i) : v_(Rational(i)) {}        // NOLINT(google-explicit-constructor)
  Scalar(long i) : v_(Rational(i)) {}       // NOLINT(google-explicit-constructor)

  /// The value 0 or 1 in the given mode.
  static Scalar zero(Mode m) { return m == Mode::kExact ? Scalar(Rational(0)) : Scalar(0.0); }
  static Scalar one(Mode m) { return m == Mode::kExact ? Scalar(Rational(1)) : Scalar(1.0); }
  static Scalar from_int(long i, Mode m) {
    return m == Mode::kExact ? Scalar(Rational(i)) : Scalar(static_cast<double>(i));
  }

  Mode mode() const { return std::holds_alternative<Rational>(v_) ? Mode::kExact : Mode::kFloat; }
  bool is_exact() const { return mode() == Mode::kExact; }

  /// Throws Error if the scalar is in float mode.
  const Rational& rational() const;
  /// The double value (exact values are converted).
  double to_double() const;

  bool is_zero() const;
  /// Exact values print as "num/den"; doubles with 17 significant digits.
  std::string str() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  /// Same mode and same value.
  friend bool operator==(const Scalar& a, const Scalar& b);

  friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

 private:
  std::variant<Rational, double> v_;
};

Scalar pow(const Scalar& base, long exponent);
Scalar abs(const Scalar& s);

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double d);

}  // namespace kpv
