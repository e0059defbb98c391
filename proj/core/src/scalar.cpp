#include "kpv/scalar.hpp"

#include <cmath>
#include <cstdio>

#include "kpv/errors.hpp"

namespace kpv {

namespace {

template <class ExactOp, class FloatOp>
void combine(std::variant<Rational, double>& lhs, const std::variant<Rational, double>& rhs,
             ExactOp exact, FloatOp flt) {
  if (lhs.index() != rhs.index()) throw ModeMismatch();
  if (auto* r = std::get_if<Rational>(&lhs)) {
    exact(*r, std::get<Rational>(rhs));
  } else {
    flt(std::get<double>(lhs), std::get<double>(rhs));
  }
}

}  // namespace

const Rational& Scalar::rational() const {
  if (const auto* r = std::get_if<Rational>(&v_)) return *r;
  throw Error("scalar is not exact");
}

double Scalar::to_double() const {
  if (const auto* r = std::get_if<Rational>(&v_)) return r->to_double();
  return std::get<double>(v_);
}

bool Scalar::is_zero() const {
  if (const auto* r = std::get_if<Rational>(&v_)) return r->is_zero();
  return std::get<double>(v_) == 0.0;
}

std::string Scalar::str() const {
  if (const auto* r = std::get_if<Rational>(&v_)) return r->str();
  return format_double(std::get<double>(v_));
}

Scalar Scalar::operator-() const {
  if (const auto* r = std::get_if<Rational>(&v_)) return Scalar(-*r);
  return Scalar(-std::get<double>(v_));
}

Scalar& Scalar::operator+=(const Scalar& o) {
  combine(v_, o.v_, [](Rational& a, const Rational& b) { a += b; },
          [](double& a, double b) { a += b; });
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  combine(v_, o.v_, [](Rational& a, const Rational& b) { a -= b; },
          [](double& a, double b) { a -= b; });
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  combine(v_, o.v_, [](Rational& a, const Rational& b) { a *= b; },
          [](double& a, double b) { a *= b; });
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  combine(v_, o.v_, [](Rational& a, const Rational& b) { a /= b; },
          [](double& a, double b) {
            if (b == 0.0) throw DivisionByZero();
            a /= b;
          });
  return *this;
}

bool operator==(const Scalar& a, const Scalar& b) { return a.v_ == b.v_; }

Scalar pow(const Scalar& base, long exponent) {
  if (base.is_exact()) return Scalar(pow(base.rational(), exponent));
  const double b = base.to_double();
  if (exponent < 0 && b == 0.0) throw DivisionByZero("negative power of zero");
  return Scalar(std::pow(b, static_cast<double>(exponent)));
}

Scalar abs(const Scalar& s) {
  if (s.is_exact()) return Scalar(abs(s.rational()));
  return Scalar(std::fabs(s.to_double()));
}

std::string format_double(double d) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

}  // namespace kpv
