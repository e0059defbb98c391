#include <benchmark/benchmark.h>

#include "kpv/catalogue.hpp"
#include "kpv/integrate.hpp"
#include "kpv/orthopoly.hpp"
#include "kpv/painleve.hpp"
#include "kpv/transforms.hpp"

using kpv::Rational;

static void BM_Stieltjes(benchmark::State& state) {
  const long N = state.range(0);
  const kpv::WeightParams w{N, Rational(-1, 3), Rational(3)};
  for (auto _ : state) benchmark::DoNotOptimize(kpv::oracle_xy(w, static_cast<int>(N)));
}
BENCHMARK(BM_Stieltjes)->Arg(2)->Arg(6)->Arg(12);

static void BM_IterateDiscrete(benchmark::State& state) {
  const long N = state.range(0);
  const kpv::WeightParams w{N, Rational(-1, 3), Rational(3)};
  for (auto _ : state) benchmark::DoNotOptimize(kpv::iterate_discrete(w, static_cast<int>(N)));
}
BENCHMARK(BM_IterateDiscrete)->Arg(2)->Arg(6)->Arg(12);

static void BM_Pushforward(benchmark::State& state) {
  const auto& src = kpv::get_system("uv56b");
  const auto& m = kpv::get_map("Phi510b");
  const auto& dst = kpv::get_system("uv510b");
  for (auto _ : state) benchmark::DoNotOptimize(kpv::pushforward_check(src, m, dst, 10, 1));
}
BENCHMARK(BM_Pushforward)->Unit(benchmark::kMillisecond);

static void BM_IntegrateOriginal(benchmark::State& state) {
  const auto& s = kpv::get_system("original");
  const auto xy1 = kpv::oracle_xy({2, Rational(0), Rational(1)}, 1);
  const kpv::Binding<double> p{{"n", 1.0}, {"N", 2.0}, {"alpha", 0.0}};
  const kpv::State x0{xy1.x[1].to_double(), xy1.y[1].to_double()};
  for (auto _ : state) benchmark::DoNotOptimize(kpv::integrate_planar(s, x0, 1.0, 2.0, p, kpv::IntegratorConfig{}));
}
BENCHMARK(BM_IntegrateOriginal)->Unit(benchmark::kMicrosecond);

static void BM_PVJetBacklund(benchmark::State& state) {
  const kpv::PVValues p{0.5, -1.0 / 18, -17.0 / 3, -0.5};
  const kpv::RootValues r{1.0, 1.0 / 3, 1.0};
  kpv::PVJet j{1.0, 3.0, 0.25, 0.0};
  j.ypp = kpv::pv_rhs(j.t, j.y, j.yp, p);
  for (auto _ : state) benchmark::DoNotOptimize(kpv::backlund_apply(j, p, r, {1, 1, 1}));
}
BENCHMARK(BM_PVJetBacklund);
BENCHMARK_MAIN();
