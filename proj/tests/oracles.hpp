#pragma once

// Reference computations used by the tests. Nothing here calls the library's
// numeric routines, so agreement with the library is evidence, not tautology.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "kpv/expr.hpp"
#include "kpv/rational.hpp"

namespace oracle {

using kpv::Rational;

struct Recurrence {
  std::vector<Rational> aa;  // a_k^2, aa[0] = 0
  std::vector<Rational> b;
};

// w(x) = C(N,x) t^x / (1-alpha)_x, built term by term from w(0) = 1.
inline std::vector<Rational> weights(long N, const Rational& alpha, const Rational& t) {
  std::vector<Rational> w{Rational(1)};
  for (long x = 0; x < N; ++x) {
    // C(N,x+1)/C(N,x) = (N-x)/(x+1); (1-alpha)_{x+1} = (1-alpha)_x (1-alpha+x).
    w.push_back(w.back() * Rational(N - x, x + 1) * t / (Rational(1) - alpha + Rational(x)));
  }
  return w;
}

// Stieltjes on the nodes 0..N: polynomials are stored by their values at the
// nodes, so inner products are plain weighted sums.
inline Recurrence gram_schmidt(long N, const Rational& alpha, const Rational& t, int nmax) {
  const auto w = weights(N, alpha, t);
  const std::size_t m = w.size();
  std::vector<Rational> prev(m, Rational(0)), cur(m, Rational(1));
  Recurrence r;
  Rational prev_norm(1);
  for (int k = 0; k <= nmax; ++k) {
    Rational norm, xnorm;
    for (std::size_t i = 0; i < m; ++i) {
      norm += cur[i] * cur[i] * w[i];
      xnorm += Rational(static_cast<long>(i)) * cur[i] * cur[i] * w[i];
    }
    const Rational bk = xnorm / norm;
    const Rational ak = k == 0 ? Rational(0) : norm / prev_norm;
    r.b.push_back(bk);
    r.aa.push_back(ak);
    std::vector<Rational> next(m);
    for (std::size_t i = 0; i < m; ++i) {
      next[i] = (Rational(static_cast<long>(i)) - bk) * cur[i] - ak * prev[i];
    }
    prev = cur;
    cur = next;
    prev_norm = norm;
  }
  return r;
}

struct XY {
  std::vector<Rational> x, y;
};

inline XY xy(long N, const Rational& alpha, const Rational& t, int nmax) {
  const Recurrence r = gram_schmidt(N, alpha, t, nmax);
  XY out;
  const Rational NN(N);
  for (int k = 0; k <= nmax; ++k) {
    const Rational kk(k);
    out.x.push_back((r.aa[k] / t + kk) / NN);
    out.y.push_back(-(r.b[k] + NN + Rational(1) + t - kk - alpha) / NN);
  }
  return out;
}

// LHS - RHS of the two discrete equations at index n.
inline Rational discrete_first(const XY& v, long N, const Rational& alpha, const Rational& t, int n) {
  const Rational NN(N), one(1);
  const Rational& y = v.y[n];
  const Rational rhs = -y * (NN + one + NN * y) * (NN + one - alpha + NN * y) / (t * NN);
  return (v.x[n] + y) * (v.x[n + 1] + y) - rhs;
}

inline Rational discrete_second(const XY& v, long N, const Rational& alpha, int n) {
  const Rational NN(N), one(1);
  const Rational& x = v.x[n];
  const Rational rhs = x * (NN * x - NN - one) * (NN * x + alpha - NN - one) / (NN * (NN * x - Rational(n)));
  return (x + v.y[n]) * (x + v.y[n - 1]) - rhs;
}

// Painleve V, written out by hand.
inline double pv_rhs(double t, double y, double yp, double a, double b, double g, double d) {
  return (1.0 / (2.0 * y) + 1.0 / (y - 1.0)) * yp * yp - yp / t +
         (y - 1.0) * (y - 1.0) / (t * t) * (a * y + b / y) + g * y / t + d * y * (y + 1.0) / (y - 1.0);
}

// Central-difference partial derivative of an expression in double.
inline double partial(const kpv::Expr& e, kpv::Binding<double> at, const std::string& s, double h = 1e-5) {
  const double x = at.at(s);
  at[s] = x + h;
  const double fp = kpv::evaluate(e, at);
  at[s] = x - h;
  const double fm = kpv::evaluate(e, at);
  return (fp - fm) / (2.0 * h);
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace oracle
