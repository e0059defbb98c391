#pragma once

#include <optional>
#include <vector>

#include "kpv/rational.hpp"

namespace kpv {

/// Parameters of the weight w(x) = C(N,x) t^x / (1-alpha)_x on {0..N}.
struct WeightParams {
  long N = 1;
  Rational alpha;
  Rational t{1};

  /// Throws Error unless N >= 1, alpha < 1 and t > 0.
  void validate() const;
  /// w(x) for x in 0..N.
  std::vector<Rational> weights() const;
};

/// m[j] = sum_x x^j w(x), j = 0..jmax, with 0^0 = 1.
using MomentTable = std::vector<Rational>;

/// aa[k] = a_k^2 (aa[0] = 0) and b[k] = b_k for k = 0..nmax.
struct RecurrenceTable {
  std::vector<Rational> aa;
  std::vector<Rational> b;
};

struct XYTable {
  std::vector<Rational> x;
  std::vector<Rational> y;
};

MomentTable moments(const WeightParams& w, int jmax);

/// Discrete Stieltjes on the moment functional: polynomials are kept as
/// coefficient vectors and <f,g> = sum f_i g_j m[i+j]. Needs m up to
/// 2*nmax+1. Throws Error if some <P_k,P_k> vanishes.
RecurrenceTable stieltjes_recurrence(const MomentTable& m, int nmax);

/// det(m[i+j]) for 0 <= i,j <= k, by fraction-free Gaussian elimination.
Rational hankel_determinant(const MomentTable& m, int k);

/// x_k = (a_k^2/t + k)/N, y_k = -(b_k + N + 1 + t - k - alpha)/N for k <= n.
XYTable xy_quantities(const RecurrenceTable& r, const WeightParams& w, int n);

/// sum_{s=0}^{-a} (a)_s/((b)_s s!) z^s for a in {0, -1, -2, ...}.
/// Throws DivisionByZero if some (b)_s vanishes in range.
Rational hyp1f1_terminating(long a, const Rational& b, const Rational& z);

/// y_0 from the terminating 1F1 closed form.
Rational initial_y0(const WeightParams& w);

/// x_0..x_nmax, y_0..y_nmax from x_0 = 0, y_0 = initial_y0 by alternately
/// solving the two discrete equations. nmax <= N. Throws DivisionByZero
/// naming the step when a pivot vanishes.
XYTable iterate_discrete(const WeightParams& w, int nmax);

struct DiscreteResidual {
  Rational first;
  /// The second equation involves y_{n-1}; absent for n = 0.
  std::optional<Rational> second;
};

/// LHS - RHS of both discrete equations at index n (needs x_{n+1}).
DiscreteResidual verify_discrete(const XYTable& xy, const WeightParams& w, int n);

struct TodaResidual {
  /// d a_n^2/dt - a_n^2 (b_n - b_{n-1})/t; absent for n = 0.
  std::optional<double> first;
  /// d b_n/dt - (a_{n+1}^2 - a_n^2)/t.
  double second = 0.0;
};

/// Central differences of a_n^2(t), b_n(t) with step h, computed exactly and
/// converted to double at the end. Requires n + 1 <= N and t - h > 0.
TodaResidual verify_toda(const WeightParams& w, int n, const Rational& h);

/// Pipeline moments -> Stieltjes -> xy_quantities up to index n.
XYTable oracle_xy(const WeightParams& w, int n);

}  // namespace kpv
