#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kpv/expr.hpp"
#include "kpv/sampling.hpp"
#include "kpv/scalar.hpp"

namespace kpv {

enum class SystemId {
  kOriginal,
  kOriginalqP,
  kOriginalQP,
  kUv11,
  kUV11,
  kUv21,
  kUV21,
  kTildeUV22,
  kUv31,
  kUV31,
  kUV41,
  kUv42,
  kUv43a,
  kUv43b,
  kUv43c,
  kUv54,
  kUv54b,
  kUv55b,
  kUv56b,
  kUv510b,
  kUV12,
  kUV22,
  kUV32,
  kUv55,
  kUv12b,
};

const std::vector<SystemId>& all_systems();
std::string system_name(SystemId id);
/// Throws UnknownId.
SystemId system_from_name(const std::string& name);

/// Exceptional divisor given as `chart[coord] == value`.
struct Divisor {
  int coord = 1;
  Expr value;
  /// Values of the other coordinate where the field is allowed to blow up
  /// (poles); at these points a 0/0 means an unresolved indeterminacy.
  std::vector<Expr> exceptional;
};

/// c1' = num1/den1, c2' = num2/den2, rational in (c1, c2, t, n, N, alpha).
struct PlanarSystem {
  SystemId id;
  std::string name;
  std::array<std::string, 2> chart;
  Expr num1, den1, num2, den2;
  std::optional<Divisor> divisor;
  /// Systems that only exist for alpha = 0.
  bool alpha_zero = false;

  Expr rhs1() const { return num1 / den1; }
  Expr rhs2() const { return num2 / den2; }
};

/// Throws UnknownId.
const PlanarSystem& get_system(SystemId id);
const PlanarSystem& get_system(const std::string& name);

/// Coordinates plus t, n, N, alpha.
template <class T>
Binding<T> system_point(const PlanarSystem& s, const T& c1, const T& c2, const Binding<T>& params) {
  Binding<T> b = params;
  b[s.chart[0]] = c1;
  b[s.chart[1]] = c2;
  return b;
}

/// Both components in the mode of the bound values. Throws SingularLocus
/// naming the vanishing denominator.
std::pair<Scalar, Scalar> evaluate_rhs(const PlanarSystem& s, const Binding<Scalar>& point, Mode mode);
std::pair<Rational, Rational> evaluate_rhs(const PlanarSystem& s, const Binding<Rational>& point);
std::pair<double, double> evaluate_rhs(const PlanarSystem& s, const Binding<double>& point);

struct RegularityReport {
  std::string id;
  bool passed = false;
  int samples = 0;
  int resamples = 0;
  int singular = 0;                  // random divisor points with a vanishing denominator
  int indeterminate_exceptional = 0; // exceptional points that are 0/0 at every draw
  std::string detail;
};

/// Evaluates the field at random points of the divisor, skipping the
/// catalogued exceptional points, and classifies each exceptional point as a
/// pole (allowed) or 0/0 (fails). `alpha` pins the parameter when given.
RegularityReport check_regular_on_divisor(const PlanarSystem& s, int samples, std::uint64_t seed,
                                          std::optional<Rational> alpha = std::nullopt);

/// Second-order reduction y'' = rhs(y, yp, t, n, N, alpha) of a planar
/// system, with the eliminated coordinate written in (y, yp, t, params).
struct ScalarODE2 {
  std::string id;
  SystemId parent;
  int y_coord = 0;  // which chart coordinate plays y
  Expr rhs;
  Expr elimination;
  /// Printed elimination formula when one is displayed, else empty.
  std::optional<Expr> displayed_elimination;
};

const std::vector<std::string>& all_ode2();
/// Throws UnknownId.
const ScalarODE2& get_ode2(const std::string& id);

/// y'' obtained by differentiating y' = rhs_y along the planar flow, after
/// eliminating the other coordinate. Used as the oracle for reductions.
Expr flow_second_derivative(const ScalarODE2& o);

struct IdentityReport {
  std::string id;
  SampleStats stats;
  bool passed() const { return stats.passed(); }
};

/// Exact check that the catalogued rhs equals the flow-derived y''.
IdentityReport verify_reduction(const std::string& ode_id, int samples, std::uint64_t seed);

/// Deterministic JSON listing of every system and reduction (prefix form).
std::string catalogue_json();

}  // namespace kpv
