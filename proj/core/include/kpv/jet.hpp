#pragma once

#include <string>

#include "kpv/errors.hpp"
#include "kpv/scalar.hpp"

namespace kpv {

inline bool is_zero_value(const Scalar& s) { return s.is_zero(); }
inline bool is_zero_value(const Rational& r) { return r.is_zero(); }
inline bool is_zero_value(double d) { return d == 0.0; }

template <class T>
struct Jet2;
template <class T>
Jet2<T> jet_div(const Jet2<T>& a, const Jet2<T>& b, const std::string& where = {});

/// Order-2 jet of a quantity along a curve t -> f(t): value, f', f''.
/// Arithmetic follows the Leibniz and quotient rules up to order two.
template <class T>
struct Jet2 {
  T v{};
  T d1{};
  T d2{};

  static Jet2 constant(T value, T zero) { return {std::move(value), zero, zero}; }

  Jet2 operator-() const { return {-v, -d1, -d2}; }

  friend Jet2 operator+(const Jet2& a, const Jet2& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
  friend Jet2 operator-(const Jet2& a, const Jet2& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + (a.d1 * b.d1 + a.d1 * b.d1) + a.v * b.d2};
  }
  friend Jet2 operator/(const Jet2& a, const Jet2& b) { return jet_div(a, b); }

  friend bool operator==(const Jet2& a, const Jet2& b) = default;
};

/// Quotient rule to order two. Throws DivisionByZero (naming `where`) when
/// the divisor's value vanishes.
template <class T>
Jet2<T> jet_div(const Jet2<T>& a, const Jet2<T>& b, const std::string& where) {
  if (is_zero_value(b.v)) throw DivisionByZero(where);
  // q = a/b;  q' = (a' - q b')/b;  q'' = (a'' - 2 q' b' - q b'')/b
  const T q = a.v / b.v;
  const T q1 = (a.d1 - q * b.d1) / b.v;
  const T q2 = (a.d2 - (q1 * b.d1 + q1 * b.d1) - q * b.d2) / b.v;
  return {q, q1, q2};
}

using Jet = Jet2<Scalar>;

}  // namespace kpv
