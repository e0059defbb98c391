#include "kpv/integrate.hpp"

#include <algorithm>
#include <cmath>

#include "kpv/errors.hpp"

namespace kpv {

void IntegratorConfig::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0)) throw Error("tolerances must be positive");
  if (!(min_step > 0.0) || !(min_step < max_step)) throw Error("need 0 < min_step < max_step");
  if (fixed_step && !(*fixed_step > 0.0)) throw Error("fixed step must be positive");
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b*, the embedded fourth-order error weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

State axpy(const State& x, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State y = x;
  for (const auto& [c, k] : terms) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += h * c * (*k)[i];
  }
  return y;
}

// Returns the watched values at (t, x); `prev` holds those of the last
// accepted step (empty at the start).
std::vector<double> check_guard(const Guard& guard, double t, const State& x, double limit,
                                const std::vector<double>& prev, double t_prev) {
  if (!guard) return {};
  std::vector<double> g = guard(t, x);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(std::fabs(g[i]) >= limit)) {
      throw GuardTrip("singular guard tripped at t=" + std::to_string(t), t);
    }
    if (i < prev.size() && (g[i] > 0) != (prev[i] > 0)) {
      throw GuardTrip("watched denominator changes sign in [" + std::to_string(t_prev) + ", " +
                          std::to_string(t) + "]",
                      t_prev);
    }
  }
  return g;
}

}  // namespace

Trajectory integrate(const Field& f, const State& x0, double t0, double t1, const IntegratorConfig& cfg,
                     const Guard& guard) {
  cfg.validate();
  Trajectory tr;
  std::vector<double> watched = check_guard(guard, t0, x0, cfg.guard, {}, t0);
  State k1 = f(t0, x0);
  tr.t.push_back(t0);
  tr.x.push_back(x0);
  tr.dx.push_back(k1);
  if (t1 == t0) return tr;

  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::fabs(t1 - t0);
  double h = cfg.fixed_step ? *cfg.fixed_step : std::min(cfg.max_step, span) * 1e-2;
  double err_prev = 1e-4;
  double t = t0;
  State x = x0;
  long steps = 0;

  while (dir * (t1 - t) > 0.0) {
    if (++steps > cfg.max_steps) throw Error("integrator step budget exhausted");
    if (h < cfg.min_step && !cfg.fixed_step) throw StepUnderflow("step size underflow at t=" + std::to_string(t), t);
    bool last = false;
    if (h >= dir * (t1 - t)) {
      h = dir * (t1 - t);
      last = true;
    }
    const double hs = dir * h;
    const State k2 = f(t + c2 * hs, axpy(x, hs, {{a21, &k1}}));
    const State k3 = f(t + c3 * hs, axpy(x, hs, {{a31, &k1}, {a32, &k2}}));
    const State k4 = f(t + c4 * hs, axpy(x, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = f(t + c5 * hs, axpy(x, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 =
        f(t + hs, axpy(x, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State xn = axpy(x, hs, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = f(t + hs, xn);

    double err = 0.0;
    if (!cfg.fixed_step) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = cfg.atol + cfg.rtol * std::max(std::fabs(x[i]), std::fabs(xn[i]));
        err = std::max(err, std::fabs(d) / sc);
      }
      if (!std::isfinite(err)) err = 1e10;
    }

    if (err <= 1.0) {
      const double t_prev = t;
      t = last ? t1 : t + hs;
      x = xn;
      k1 = k7;
      watched = check_guard(guard, t, x, cfg.guard, watched, t_prev);
      tr.t.push_back(t);
      tr.x.push_back(x);
      tr.dx.push_back(k1);
      if (!cfg.fixed_step) {
        // PI controller (alpha = 0.17, beta = 0.04).
        const double e = std::max(err, 1e-10);
        double fac = 0.9 * std::pow(e, -0.17) * std::pow(err_prev, 0.04);
        fac = std::clamp(fac, 0.2, 5.0);
        h = std::min(h * fac, cfg.max_step);
        err_prev = std::max(err, 1e-4);
      }
    } else {
      ++tr.rejected;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
  }
  return tr;
}

namespace {

std::size_t locate(const Trajectory& tr, double s) {
  const bool inc = tr.t.back() >= tr.t.front();
  const double lo = inc ? tr.t.front() : tr.t.back();
  const double hi = inc ? tr.t.back() : tr.t.front();
  if (s < lo - 1e-14 || s > hi + 1e-14) throw Error("time outside trajectory range");
  if (tr.size() == 1) return 0;
  std::size_t i = 0;
  if (inc) {
    i = static_cast<std::size_t>(std::upper_bound(tr.t.begin(), tr.t.end(), s) - tr.t.begin());
  } else {
    i = static_cast<std::size_t>(
        std::upper_bound(tr.t.begin(), tr.t.end(), s, std::greater<double>()) - tr.t.begin());
  }
  if (i == 0) i = 1;
  if (i >= tr.size()) i = tr.size() - 1;
  return i - 1;
}

}  // namespace

State Trajectory::at(double s) const {
  const std::size_t i = locate(*this, s);
  if (size() == 1) return x[0];
  const double h = t[i + 1] - t[i];
  const double th = (s - t[i]) / h;
  const double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
  const double h10 = th * (1 - th) * (1 - th);
  const double h01 = th * th * (3 - 2 * th);
  const double h11 = th * th * (th - 1);
  State out(x[i].size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = h00 * x[i][k] + h10 * h * dx[i][k] + h01 * x[i + 1][k] + h11 * h * dx[i + 1][k];
  }
  return out;
}

State Trajectory::derivative_at(double s) const {
  const std::size_t i = locate(*this, s);
  if (size() == 1) return dx[0];
  const double h = t[i + 1] - t[i];
  const double th = (s - t[i]) / h;
  const double d00 = 6 * th * (th - 1) / h;
  const double d10 = (1 - th) * (1 - 3 * th);
  const double d01 = -d00;
  const double d11 = th * (3 * th - 2);
  State out(x[i].size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = d00 * x[i][k] + d10 * dx[i][k] + d01 * x[i + 1][k] + d11 * dx[i + 1][k];
  }
  return out;
}

namespace {

Guard denominator_guard(std::vector<Expr> dens, Binding<double> base, std::vector<std::string> names) {
  return [dens = std::move(dens), base = std::move(base), names = std::move(names)](double t,
                                                                                     const State& x) {
    Binding<double> b = base;
    b["t"] = t;
    for (std::size_t i = 0; i < names.size(); ++i) b[names[i]] = x[i];
    try {
      return evaluate_all(dens, b);
    } catch (const DivisionByZero&) {
      return std::vector<double>{0.0};
    }
  };
}

}  // namespace

Trajectory integrate_planar(const PlanarSystem& s, const State& x0, double t0, double t1,
                            const Binding<double>& params, const IntegratorConfig& cfg) {
  if (x0.size() != 2) throw Error("planar state needs two coordinates");
  const std::vector<Expr> rhs{s.num1, s.den1, s.num2, s.den2};
  Field f = [&](double t, const State& x) {
    Binding<double> b = params;
    b["t"] = t;
    b[s.chart[0]] = x[0];
    b[s.chart[1]] = x[1];
    const auto v = evaluate_all(rhs, b);
    return State{v[0] / v[1], v[2] / v[3]};
  };
  std::vector<Expr> dens{s.den1, s.den2};
  for (const auto& e : {s.num1, s.den1, s.num2, s.den2}) {
    for (auto& d : denominators(e)) dens.push_back(d);
  }
  std::vector<std::string> names{s.chart[0], s.chart[1]};
  Trajectory tr = integrate(f, x0, t0, t1, cfg, denominator_guard(dens, params, names));
  tr.names = names;
  return tr;
}

Trajectory integrate_second_order(const Expr& rhs, double y0, double yp0, double t0, double t1,
                                  const Binding<double>& params, const IntegratorConfig& cfg) {
  Field f = [&](double t, const State& x) {
    Binding<double> b = params;
    b["t"] = t;
    b["y"] = x[0];
    b["yp"] = x[1];
    return State{x[1], evaluate(rhs, b)};
  };
  Trajectory tr = integrate(f, State{y0, yp0}, t0, t1, cfg,
                            denominator_guard(denominators(rhs), params, {"y", "yp"}));
  tr.names = {"y", "yp"};
  return tr;
}

Trajectory integrate_ode2(const ScalarODE2& o, double y0, double yp0, double t0, double t1,
                          const Binding<double>& params, const IntegratorConfig& cfg) {
  return integrate_second_order(o.rhs, y0, yp0, t0, t1, params, cfg);
}

std::vector<Jet2<double>> trajectory_jets(const Trajectory& tr) {
  std::vector<Jet2<double>> out;
  out.reserve(tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (tr.x[i].size() != 2) throw Error("not a second-order trajectory");
    out.push_back({tr.x[i][0], tr.x[i][1], tr.dx[i][1]});
  }
  return out;
}

TrajectoryComparison compare_trajectories(const Trajectory& a, const std::function<State(double)>& b,
                                          double tol) {
  TrajectoryComparison c;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const State ref = b(a.t[i]);
    for (std::size_t k = 0; k < ref.size() && k < a.x[i].size(); ++k) {
      const double d = std::fabs(a.x[i][k] - ref[k]) / std::max(std::fabs(ref[k]), 1.0);
      if (!(d <= c.max_deviation)) {
        c.max_deviation = d;
        c.at_t = a.t[i];
      }
    }
  }
  c.passed = c.max_deviation < tol;
  return c;
}

void write_csv(const Trajectory& tr, std::ostream& os, bool with_derivatives) {
  os << "t,coord1,coord2";
  if (with_derivatives) os << ",d1,d2";
  os << '\n';
  for (std::size_t i = 0; i < tr.size(); ++i) {
    os << format_double(tr.t[i]);
    for (double v : tr.x[i]) os << ',' << format_double(v);
    if (with_derivatives) {
      for (double v : tr.dx[i]) os << ',' << format_double(v);
    }
    os << '\n';
  }
}

}  // namespace kpv
