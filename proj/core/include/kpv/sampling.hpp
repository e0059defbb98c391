#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "kpv/expr.hpp"
#include "kpv/rational.hpp"

namespace kpv {

inline constexpr int kDefaultSamples = 50;

/// Seeded source of random rationals num/den with num in [-99, 99] and
/// den in [1, 99].
class RationalSampler {
 public:
  explicit RationalSampler(std::uint64_t seed) : rng_(seed) {}

  Rational draw();
  Rational draw_nonzero();
  /// Integer in [lo, hi].
  long draw_int(long lo, long hi);
  Binding<Rational> draw_binding(const std::vector<std::string>& names);

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Outcome of a randomised identity check.
struct SampleStats {
  int samples = 0;    // accepted samples
  int resamples = 0;  // draws rejected on a vanishing denominator
  int failures = 0;
  Rational max_residual;  // largest |residual| over accepted samples
  std::string first_failure;
  bool passed() const { return failures == 0 && samples > 0; }
};

/// Draws `samples` bindings over `names`, calls `residual` on each and
/// records |result|. A draw that throws DivisionByZero or SingularLocus is
/// rejected and redrawn; after `max_resamples` rejections the check gives up
/// with whatever samples it has (reported as a failure when none).
SampleStats check_identity(const std::vector<std::string>& names, int samples, std::uint64_t seed,
                           const std::function<Rational(const Binding<Rational>&)>& residual,
                           int max_resamples = 2000);

/// Derives a per-check seed from a run seed and a label, so that checks are
/// reproducible independently of their order.
std::uint64_t derive_seed(std::uint64_t seed, const std::string& label);

/// The standard parameter symbols.
inline const std::vector<std::string>& parameter_names() {
  static const std::vector<std::string> kNames{"t", "n", "N", "alpha"};
  return kNames;
}

}  // namespace kpv
