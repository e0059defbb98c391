#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kpv/catalogue.hpp"
#include "kpv/expr.hpp"
#include "kpv/sampling.hpp"

namespace kpv {

using Chart = std::array<std::string, 2>;

/// Source coordinates written in target coordinates (blow-up convention
/// "source = center + chart product").
struct BirationalMap {
  std::string id;
  Chart source;
  Chart target;
  std::array<Expr, 2> forward;
  std::optional<std::string> inverse;  // id of the displayed inverse
};

const std::vector<std::string>& all_maps();
/// Throws UnknownId.
const BirationalMap& get_map(const std::string& id);

/// Image of a target-chart point. Throws SingularLocus on a zero denominator.
std::array<Rational, 2> apply_map(const BirationalMap& m, const std::array<Rational, 2>& pt,
                                  const Binding<Rational>& params);

/// Composite of a chain given outermost first: maps[i].target must equal
/// maps[i+1].source (throws Error otherwise). With `strict = false` charts
/// are matched by position, which lets tests compose deliberately wrong
/// chains.
BirationalMap compose_maps(const std::vector<std::string>& chain, bool strict = true);
BirationalMap compose_maps(const std::vector<BirationalMap>& chain, bool strict = true);

enum class BlowupConvention { kCenterPlusProduct, kProductFirst };
/// Relabels the target chart for the alternative convention x = a + v,
/// y = b + uv. Bookkeeping only; no verification is attached to it.
BirationalMap with_convention(const BirationalMap& m, BlowupConvention c);

struct CheckReport {
  std::string id;
  SampleStats stats;
  bool passed() const { return stats.passed(); }
};

struct IndeterminacyPoint {
  std::string id;
  SystemId system;
  std::array<Expr, 2> coords;
  bool alpha_zero = false;
};

const std::vector<IndeterminacyPoint>& indeterminacy_points();
const IndeterminacyPoint& get_indeterminacy_point(const std::string& id);

/// At random parameter values, numerator and denominator of at least one
/// component vanish at the point. The residual recorded per sample is 0 on
/// success and 1 otherwise.
CheckReport verify_indeterminacy(const IndeterminacyPoint& p, int samples, std::uint64_t seed);
/// The two points coincide once alpha = 0.
CheckReport verify_coincidence_alpha0(const IndeterminacyPoint& a, const IndeterminacyPoint& b,
                                      int samples, std::uint64_t seed);

/// Chain-rule check that `m` carries the `source` field to the `target`
/// field: J (c1', c2')_target = S(F) - dF/dt, solved by Cramer's rule and
/// compared exactly with the target rhs.
CheckReport pushforward_check(const PlanarSystem& source, const BirationalMap& m,
                              const PlanarSystem& target, int samples, std::uint64_t seed);

struct PushforwardTriple {
  std::string source;
  std::string map;
  std::string target;
};

/// Every catalogued (source, map, target) triple.
const std::vector<PushforwardTriple>& pushforward_triples();

/// forward after inverse and inverse after forward are the identity.
CheckReport verify_inverse(const BirationalMap& m, int samples, std::uint64_t seed);

struct Decomposition {
  std::string id;
  std::string lhs;                 // map id
  std::vector<std::string> chain;  // outermost first
  /// Target-chart relabelling applied to the composite before comparing.
  std::optional<Chart> relabel;
  /// Bridge pushforwards checked alongside, as (source, map, target).
  std::vector<PushforwardTriple> bridges;
};

const std::vector<Decomposition>& decompositions();
const Decomposition& get_decomposition(const std::string& id);

/// Composite equals the left-hand map, plus every bridge pushforward.
CheckReport verify_decomposition(const Decomposition& d, int samples, std::uint64_t seed);

/// Equality of two maps with the same charts at random points.
CheckReport verify_map_equal(const std::string& id, const BirationalMap& a, const BirationalMap& b,
                             int samples, std::uint64_t seed);

}  // namespace kpv
