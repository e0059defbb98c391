#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kpv/integrate.hpp"
#include "kpv/rational.hpp"
#include "kpv/report.hpp"

namespace kpv {

inline constexpr std::uint64_t kDefaultSeed = 20240613;

struct RunConfig {
  std::uint64_t seed = kDefaultSeed;
  int samples = kDefaultSamples;
  double tol = 1e-6;       // float residual tolerance
  double ode_tol = 1e-7;   // integrated-vs-oracle relative tolerance
  std::vector<long> Ns{1, 2, 3, 4, 5, 6};
  std::optional<long> n;   // restrict the sweep to one n
  std::vector<Rational> alphas{Rational(0), Rational(1, 2), Rational(-1, 3)};
  std::vector<Rational> ts{Rational(1, 2), Rational(1), Rational(3)};
  Rational from_t{1};
  Rational to_t{2};
  IntegratorConfig integrator;

  /// Throws Error on an empty or invalid sweep.
  void validate() const;
};

/// oracle, discrete, toda, ode, transforms, decompositions, regularity, pv,
/// backlund, hamiltonian (and "all").
const std::vector<std::string>& suite_names();

/// Throws UnknownId on an unknown suite name.
SuiteReport run_suite(const std::string& name, const RunConfig& cfg);

}  // namespace kpv
