#include "kpv/sampling.hpp"

#include "kpv/errors.hpp"

namespace kpv {

Rational RationalSampler::draw() {
  std::uniform_int_distribution<long> num(-99, 99);
  std::uniform_int_distribution<long> den(1, 99);
  const long a = num(rng_);
  const long b = den(rng_);
  return Rational(a, b);
}

Rational RationalSampler::draw_nonzero() {
  for (;;) {
    Rational r = draw();
    if (!r.is_zero()) return r;
  }
}

long RationalSampler::draw_int(long lo, long hi) {
  std::uniform_int_distribution<long> d(lo, hi);
  return d(rng_);
}

Binding<Rational> RationalSampler::draw_binding(const std::vector<std::string>& names) {
  Binding<Rational> b;
  for (const auto& name : names) b[name] = draw();
  return b;
}

SampleStats check_identity(const std::vector<std::string>& names, int samples, std::uint64_t seed,
                           const std::function<Rational(const Binding<Rational>&)>& residual,
                           int max_resamples) {
  RationalSampler rs(seed);
  SampleStats st;
  while (st.samples < samples) {
    const Binding<Rational> b = rs.draw_binding(names);
    Rational r;
    try {
      r = residual(b);
    } catch (const DivisionByZero&) {
      if (++st.resamples > max_resamples) break;
      continue;
    } catch (const SingularLocus&) {
      if (++st.resamples > max_resamples) break;
      continue;
    }
    ++st.samples;
    const Rational a = abs(r);
    if (a > st.max_residual) st.max_residual = a;
    if (!r.is_zero()) {
      if (st.failures++ == 0) {
        std::string where;
        for (const auto& name : names) {
          if (!where.empty()) where += ", ";
          where += name + "=" + b.at(name).str();
        }
        st.first_failure = "residual " + r.str() + " at " + where;
      }
    }
  }
  if (st.samples < samples && st.failures == 0) {
    ++st.failures;
    st.first_failure = "too many rejected samples";
  }
  return st;
}

std::uint64_t derive_seed(std::uint64_t seed, const std::string& label) {
  // FNV-1a over the label, mixed with the run seed.
  std::uint64_t h = 1469598103934665603ULL ^ seed;
  for (unsigned char c : label) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  return h;
}

}  // namespace kpv
