#include "kpv/orthopoly.hpp"

#include <string>

#include "kpv/errors.hpp"

namespace kpv {

void WeightParams::validate() const {
  if (N < 1) throw Error("N must be a positive integer");
  if (!(alpha < Rational(1))) throw Error("alpha must be < 1");
  if (!(t > Rational(0))) throw Error("t must be > 0");
}

std::vector<Rational> WeightParams::weights() const {
  validate();
  std::vector<Rational> w(static_cast<std::size_t>(N) + 1);
  // w(x+1)/w(x) = (N-x)/(x+1) * t/(1-alpha+x)
  w[0] = Rational(1);
  for (long x = 0; x < N; ++x) {
    w[x + 1] = w[x] * Rational(N - x, x + 1) * t / (Rational(1) - alpha + Rational(x));
  }
  return w;
}

MomentTable moments(const WeightParams& w, int jmax) {
  if (jmax < 0) throw Error("jmax must be >= 0");
  const auto wt = w.weights();
  MomentTable m(static_cast<std::size_t>(jmax) + 1);
  for (long x = 0; x <= w.N; ++x) {
    Rational xp(1);  // x^0 = 1, including x = 0
    for (int j = 0; j <= jmax; ++j) {
      m[j] += xp * wt[x];
      xp *= Rational(x);
    }
  }
  return m;
}

namespace {

using Poly = std::vector<Rational>;

Rational inner(const Poly& f, const Poly& g, const MomentTable& m, int shift) {
  Rational s;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i].is_zero()) continue;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const std::size_t k = i + j + static_cast<std::size_t>(shift);
      if (k >= m.size()) throw Error("moment table too short");
      s += f[i] * g[j] * m[k];
    }
  }
  return s;
}

}  // namespace

RecurrenceTable stieltjes_recurrence(const MomentTable& m, int nmax) {
  if (nmax < 0) throw Error("nmax must be >= 0");
  RecurrenceTable r;
  Poly prev;           // P_{-1} = 0
  Poly cur{Rational(1)};  // P_0 = 1
  Rational prev_norm;
  for (int k = 0; k <= nmax; ++k) {
    const Rational norm = inner(cur, cur, m, 0);
    if (norm.is_zero()) {
      throw Error("vanishing norm <P_" + std::to_string(k) + ",P_" + std::to_string(k) + ">");
    }
    const Rational bk = inner(cur, cur, m, 1) / norm;
    const Rational ak2 = k == 0 ? Rational(0) : norm / prev_norm;
    r.b.push_back(bk);
    r.aa.push_back(ak2);
    if (k == nmax) break;
    // P_{k+1} = (x - b_k) P_k - a_k^2 P_{k-1}
    Poly next(cur.size() + 1);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next[i + 1] += cur[i];
      next[i] -= bk * cur[i];
    }
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= ak2 * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
    prev_norm = norm;
  }
  return r;
}

Rational hankel_determinant(const MomentTable& m, int k) {
  const std::size_t n = static_cast<std::size_t>(k) + 1;
  if (2 * static_cast<std::size_t>(k) >= m.size()) throw Error("moment table too short");
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i + j];
  Rational det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c].is_zero()) ++p;
    if (p == n) return Rational(0);
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      const Rational f = a[i][c] / a[c][c];
      if (f.is_zero()) continue;
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

XYTable xy_quantities(const RecurrenceTable& r, const WeightParams& w, int n) {
  if (n < 0 || static_cast<std::size_t>(n) >= r.b.size()) throw Error("recurrence table too short");
  const Rational N(w.N);
  XYTable xy;
  for (int k = 0; k <= n; ++k) {
    xy.x.push_back((r.aa[k] / w.t + Rational(k)) / N);
    xy.y.push_back(-(r.b[k] + N + Rational(1) + w.t - Rational(k) - w.alpha) / N);
  }
  return xy;
}

Rational hyp1f1_terminating(long a, const Rational& b, const Rational& z) {
  if (a > 0) throw Error("hyp1f1_terminating needs a nonpositive integer a");
  Rational term(1);
  Rational sum(1);
  for (long s = 0; s < -a; ++s) {
    // term_{s+1} = term_s (a+s) z / ((b+s)(s+1))
    const Rational bs = b + Rational(s);
    if (bs.is_zero()) throw DivisionByZero("(b)_" + std::to_string(s + 1));
    term = term * Rational(a + s) * z / (bs * Rational(s + 1));
    sum += term;
  }
  return sum;
}

Rational initial_y0(const WeightParams& w) {
  w.validate();
  const Rational N(w.N);
  const Rational one(1);
  const Rational den = hyp1f1_terminating(-w.N, one - w.alpha, -w.t);
  if (den.is_zero()) throw DivisionByZero("M(-N, 1-alpha, -t)");
  const Rational num = hyp1f1_terminating(-w.N + 1, Rational(2) - w.alpha, -w.t);
  return -(N + one + w.t - w.alpha) / N - w.t / (one - w.alpha) * num / den;
}

namespace {

// Right-hand sides of the two discrete equations.
Rational rhs_first(const Rational& y, const WeightParams& w) {
  const Rational N(w.N);
  const Rational one(1);
  return -(y * (N + one + N * y) * (N + one - w.alpha + N * y)) / (w.t * N);
}

Rational rhs_second(const Rational& x, const WeightParams& w, int n) {
  const Rational N(w.N);
  const Rational one(1);
  const Rational den = N * (N * x - Rational(n));
  if (den.is_zero()) throw DivisionByZero("N x_n - n at n=" + std::to_string(n));
  return x * (-N - one + N * x) * (w.alpha - N - one + N * x) / den;
}

}  // namespace

XYTable iterate_discrete(const WeightParams& w, int nmax) {
  w.validate();
  if (nmax < 0 || nmax > w.N) throw Error("nmax must lie in 0..N");
  XYTable xy;
  xy.x.push_back(Rational(0));
  xy.y.push_back(initial_y0(w));
  for (int n = 0; n < nmax; ++n) {
    const Rational piv = xy.x[n] + xy.y[n];
    if (piv.is_zero()) throw DivisionByZero("x_n + y_n at n=" + std::to_string(n));
    xy.x.push_back(rhs_first(xy.y[n], w) / piv - xy.y[n]);
    const Rational piv2 = xy.x[n + 1] + xy.y[n];
    if (piv2.is_zero()) throw DivisionByZero("x_n + y_{n-1} at n=" + std::to_string(n + 1));
    xy.y.push_back(rhs_second(xy.x[n + 1], w, n + 1) / piv2 - xy.x[n + 1]);
  }
  return xy;
}

DiscreteResidual verify_discrete(const XYTable& xy, const WeightParams& w, int n) {
  if (n < 0 || static_cast<std::size_t>(n) + 1 >= xy.x.size()) throw Error("xy table too short");
  DiscreteResidual r;
  const Rational s = xy.x[n] + xy.y[n];
  r.first = s * (xy.x[n + 1] + xy.y[n]) - rhs_first(xy.y[n], w);
  if (n >= 1) r.second = s * (xy.x[n] + xy.y[n - 1]) - rhs_second(xy.x[n], w, n);
  return r;
}

namespace {

RecurrenceTable recurrence_at(const WeightParams& w, int nmax) {
  return stieltjes_recurrence(moments(w, 2 * nmax + 1), nmax);
}

}  // namespace

TodaResidual verify_toda(const WeightParams& w, int n, const Rational& h) {
  w.validate();
  if (n < 0 || n + 1 > w.N) throw Error("toda check needs 0 <= n < N");
  if (!(w.t - h > Rational(0))) throw Error("t - h must be > 0");
  WeightParams lo = w;
  WeightParams hi = w;
  lo.t = w.t - h;
  hi.t = w.t + h;
  const auto r0 = recurrence_at(w, n + 1);
  const auto rl = recurrence_at(lo, n + 1);
  const auto rh = recurrence_at(hi, n + 1);
  const Rational two_h = h + h;
  TodaResidual out;
  if (n >= 1) {
    const Rational d = (rh.aa[n] - rl.aa[n]) / two_h;
    out.first = (d - r0.aa[n] * (r0.b[n] - r0.b[n - 1]) / w.t).to_double();
  }
  const Rational db = (rh.b[n] - rl.b[n]) / two_h;
  out.second = (db - (r0.aa[n + 1] - r0.aa[n]) / w.t).to_double();
  return out;
}

XYTable oracle_xy(const WeightParams& w, int n) { return xy_quantities(recurrence_at(w, n), w, n); }

}  // namespace kpv
