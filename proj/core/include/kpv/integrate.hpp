#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "kpv/catalogue.hpp"
#include "kpv/expr.hpp"

namespace kpv {

struct IntegratorConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 0.05;
  double min_step = 1e-12;
  /// Abort when any watched denominator drops below this in magnitude.
  double guard = 1e-6;
  /// When set, take fixed steps of this size without error control.
  std::optional<double> fixed_step;
  long max_steps = 2'000'000;

  /// Throws Error on inconsistent settings.
  void validate() const;
};

using State = std::vector<double>;
using Field = std::function<State(double t, const State& x)>;
/// Signed values of the watched denominators at (t, x). The integrator trips
/// when one drops below the guard distance in magnitude or changes sign
/// between accepted steps.
using Guard = std::function<std::vector<double>(double t, const State& x)>;

/// Accepted steps with values and derivatives, enough for cubic Hermite
/// dense output on every step.
struct Trajectory {
  std::vector<double> t;
  std::vector<State> x;
  std::vector<State> dx;
  std::vector<std::string> names;
  int rejected = 0;

  std::size_t size() const { return t.size(); }
  double t_begin() const { return t.front(); }
  double t_end() const { return t.back(); }
  /// Hermite interpolant; throws Error outside [t_begin, t_end].
  State at(double s) const;
  State derivative_at(double s) const;
};

/// Thrown when the singular guard trips; carries the last good time.
class GuardTrip : public SingularLocus {
 public:
  GuardTrip(const std::string& what, double t) : SingularLocus(what), t_(t) {}
  double t() const noexcept { return t_; }

 private:
  double t_;
};

/// Thrown when the step size collapses, typically near a movable pole.
class StepUnderflow : public Error {
 public:
  StepUnderflow(const std::string& what, double t) : Error(what), t_(t) {}
  double t() const noexcept { return t_; }

 private:
  double t_;
};

/// Dormand-Prince 5(4), FSAL, with a PI step-size controller. t1 may be less
/// than t0. A zero-length interval returns the initial point.
Trajectory integrate(const Field& f, const State& x0, double t0, double t1, const IntegratorConfig& cfg,
                     const Guard& guard = {});

Trajectory integrate_planar(const PlanarSystem& s, const State& x0, double t0, double t1,
                            const Binding<double>& params, const IntegratorConfig& cfg);

/// y'' = rhs(y, yp, t, params) as a first-order system (y, yp).
Trajectory integrate_second_order(const Expr& rhs, double y0, double yp0, double t0, double t1,
                                  const Binding<double>& params, const IntegratorConfig& cfg);
Trajectory integrate_ode2(const ScalarODE2& o, double y0, double yp0, double t0, double t1,
                          const Binding<double>& params, const IntegratorConfig& cfg);

/// (y, y', y'') at every accepted step of a second-order trajectory.
std::vector<Jet2<double>> trajectory_jets(const Trajectory& tr);

struct TrajectoryComparison {
  double max_deviation = 0.0;  // max |a - b| / max(|b|, 1) over samples and components
  double at_t = 0.0;
  bool passed = false;
};

/// Compares `a` at its own sample times against `b(t)`.
TrajectoryComparison compare_trajectories(const Trajectory& a,
                                          const std::function<State(double)>& b, double tol);

/// "t,coord1,coord2[,d1,d2]" with 17 significant digits.
void write_csv(const Trajectory& tr, std::ostream& os, bool with_derivatives = false);

}  // namespace kpv
