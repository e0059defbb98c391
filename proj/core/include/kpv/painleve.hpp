#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kpv/expr.hpp"
#include "kpv/integrate.hpp"
#include "kpv/sampling.hpp"
#include "kpv/scalar.hpp"

namespace kpv {

/// Catalogued PV parameter sets, as expressions in (n, N, alpha).
enum class PVSet { kUV11, kUV21, kUV31, kAlt, kTilde, kWalter };

struct PVParams {
  Expr a5, b5, g5, d5;
};

/// Square roots carried next to a parameter set: c^2 = 2 a5, a^2 = -2 b5,
/// k^2 = -2 d5. Carrying them avoids symbolic square roots in chains.
struct PVRoots {
  Expr c, a, k;
};

/// Numeric parameters.
struct PVValues {
  Scalar a5, b5, g5, d5;
};

struct RootValues {
  Scalar c, a, k;
};

/// (t, y, y', y'') at one point of a curve.
struct PVJet {
  Scalar t, y, yp, ypp;
};

const std::vector<PVSet>& all_pv_sets();
std::string pv_set_name(PVSet s);
/// Accepts set names and chart aliases (UV11, uv54, UV12, uv55, UV21, UV22,
/// UV31, UV32, UV11_alt, tildeUV22, walter). Throws UnknownId.
PVSet pv_set_from_name(const std::string& name);

PVParams pv_params_for(PVSet s);
PVParams pv_params_for(const std::string& chart);
/// Literal roots for the sets used as Backlund sources; the literal is the
/// nonnegative-looking factor of each square. Throws UnknownId for others.
PVRoots pv_roots_for(PVSet s);

PVValues evaluate_params(const PVParams& p, const Binding<Scalar>& b, Mode mode);
RootValues evaluate_roots(const PVRoots& r, const Binding<Scalar>& b, Mode mode);

/// PV right-hand side in the symbols y, yp, t.
Expr pv_rhs_expr(const PVParams& p);
/// Throws SingularLocus when t = 0 or y is 0 or 1.
Scalar pv_rhs(const Scalar& t, const Scalar& y, const Scalar& yp, const PVValues& p);
Scalar pv_residual(const PVJet& j, const PVValues& p);

struct BacklundSigns {
  int e1 = 1, e2 = 1, e3 = 1;

  /// Throws Error unless every sign is +1 or -1.
  void validate() const;
  std::string str() const;  // "T(+1,-1,+1)"
};

/// Positive-branch roots of numeric parameters. In exact mode a radicand
/// that is negative or not a rational square raises an Error that suggests
/// float mode.
RootValues positive_roots(const PVValues& p);

PVValues backlund_params(const PVValues& p, const BacklundSigns& s);
PVValues backlund_params(const PVValues& p, const RootValues& r, const BacklundSigns& s);

/// One symbolic step, carrying roots: c1 = X/(2k), a1 = Y/(2k) with
/// X, Y = g5 +- e3 k (1 - e2 a - e1 c).
std::pair<PVParams, PVRoots> backlund_step(const PVParams& p, const PVRoots& r, const BacklundSigns& s);

/// y1 as an expression in y, yp, t and the root symbols c, a, k.
Expr backlund_map_expr(const BacklundSigns& s);

struct BacklundResult {
  PVJet jet;
  PVValues params;
  RootValues roots;
};

/// Pushes a jet lying on a source PV solution through one transformation.
/// y''' comes from differentiating the source equation, so the new y'' is
/// exact. Throws DivisionByZero when the map's denominator vanishes.
BacklundResult backlund_apply(const PVJet& j, const PVValues& p, const RootValues& r, const BacklundSigns& s);
BacklundResult backlund_apply(const PVJet& j, const PVValues& p, const BacklundSigns& s);

/// A second-order reduction together with the shift that turns it into PV.
struct MobiusReduction {
  std::string id;
  std::string ode;  // reduction in the catalogue
  PVSet params;
  Expr forward;  // reduction variable in terms of the PV variable y
  Expr inverse;  // PV variable in terms of the reduction variable, also written in y
  bool alpha_zero = false;
};

const std::vector<MobiusReduction>& mobius_reductions();
/// Throws UnknownId.
const MobiusReduction& get_mobius(const std::string& id);

struct MobiusReport {
  std::string id;
  SampleStats stats;
  bool passed() const { return stats.passed(); }
};

/// Exact check on random jets: with y'' taken from PV, the shifted variable
/// satisfies the reduction.
MobiusReport mobius_reduce(const std::string& id, int samples, std::uint64_t seed);

/// Float residual of a mapped trajectory, scaled as |y'' - rhs| / max(1, |y''|).
struct TrajectoryResidual {
  std::string id;
  double t0 = 0.0, t1 = 0.0;  // window actually integrated
  std::size_t points = 0;
  double max_residual = 0.0;
  double tolerance = 1e-6;
  std::string detail;
  bool passed() const { return points > 0 && max_residual < tolerance; }
};

/// Sample parameters used by the trajectory checks.
Binding<double> default_trajectory_params(bool alpha_zero);

/// Integrates the reduction, maps back to y and measures the PV residual.
/// A guard trip shrinks the window (recorded in the result).
TrajectoryResidual mobius_trajectory_check(const std::string& id, const IntegratorConfig& cfg,
                                           double tol = 1e-6);

/// A composition of Backlund transformations between parameter sets.
struct Composition {
  std::string id;
  PVSet source;
  PVSet target;
  std::vector<BacklundSigns> factors;  // in order of application
  Expr closed_form;                    // one-shot y-map in y, yp, t, params
};

const std::vector<Composition>& compositions();
/// Throws UnknownId.
const Composition& get_composition(const std::string& id);

struct CompositionReport {
  std::string id;
  SampleStats chain;        // parameter chain lands on the target set
  SampleStats closed_form;  // factored map equals the closed form on jets
  TrajectoryResidual trajectory;
  double target_deviation = 0.0;  // mapped curve vs directly integrated target
  bool passed() const {
    return chain.passed() && closed_form.passed() && trajectory.passed() &&
           target_deviation < trajectory.tolerance;
  }
};

/// Applies the factors of `c` to a jet, in the given mode.
BacklundResult apply_composition(const Composition& c, const PVJet& j, const Binding<Scalar>& params, Mode mode);

CompositionReport verify_composition(const std::string& id, int samples, std::uint64_t seed,
                                     const IntegratorConfig& cfg, double tol = 1e-6);

}  // namespace kpv
