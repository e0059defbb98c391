#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "kpv/catalogue.hpp"
#include "kpv/errors.hpp"
#include "kpv/integrate.hpp"
#include "kpv/orthopoly.hpp"
#include "kpv/parse.hpp"
#include "oracles.hpp"

using kpv::IntegratorConfig;
using kpv::Rational;
using kpv::State;

namespace {

kpv::Binding<double> original_params(long N, double alpha, long n) {
  return {{"n", static_cast<double>(n)}, {"N", static_cast<double>(N)}, {"alpha", alpha}};
}

// (q, p) of the original system from the Gram-Schmidt oracle at t.
State oracle_state(long N, const Rational& alpha, const Rational& t, int n) {
  const auto v = oracle::xy(N, alpha, t, n);
  return {v.x[n].to_double(), v.y[n].to_double()};
}

}  // namespace

TEST(Integrate, ConfigValidation) {
  IntegratorConfig c;
  EXPECT_NO_THROW(c.validate());
  c.rtol = -1;
  EXPECT_THROW(c.validate(), kpv::Error);
  c = {};
  c.fixed_step = 0.0;
  EXPECT_THROW(c.validate(), kpv::Error);
}

TEST(Integrate, ExponentialAndOscillator) {
  IntegratorConfig c;
  const auto tr = kpv::integrate([](double, const State& x) { return State{x[0], x[2], -x[1]}; },
                                 {1.0, 0.0, 1.0}, 0.0, 3.0, c);
  EXPECT_NEAR(tr.t_end(), 3.0, 0.0);
  EXPECT_NEAR(tr.x.back()[0], std::exp(3.0), 1e-8 * std::exp(3.0));
  EXPECT_NEAR(tr.x.back()[1], std::sin(3.0), 1e-9);
  // Dense output between steps.
  EXPECT_NEAR(tr.at(1.2345)[1], std::sin(1.2345), 1e-8);
  EXPECT_NEAR(tr.derivative_at(1.2345)[1], std::cos(1.2345), 1e-6);
}

TEST(Integrate, BackwardAndZeroLength) {
  IntegratorConfig c;
  const auto back = kpv::integrate([](double, const State& x) { return State{-x[0]}; }, {1.0}, 1.0, 0.0, c);
  EXPECT_NEAR(back.x.back()[0], std::exp(1.0), 1e-9);
  const auto none = kpv::integrate([](double, const State& x) { return State{-x[0]}; }, {1.0}, 2.0, 2.0, c);
  EXPECT_EQ(none.size(), 1u);
  EXPECT_EQ(none.x.front()[0], 1.0);
}

TEST(Integrate, FixedStepConvergesAtFifthOrder) {
  auto err = [](double h) {
    IntegratorConfig c;
    c.fixed_step = h;
    const auto tr = kpv::integrate([](double t, const State& x) { return State{x[0] * std::cos(t)}; }, {1.0},
                                   0.0, 2.0, c);
    return std::abs(tr.x.back()[0] - std::exp(std::sin(2.0)));
  };
  const double ratio = err(0.1) / err(0.05);
  EXPECT_GT(ratio, 20.0);  // 2^5 = 32 in the asymptotic regime
}

TEST(Integrate, TighterToleranceReducesError) {
  auto err = [](double rtol) {
    IntegratorConfig c;
    c.rtol = rtol;
    c.atol = rtol * 1e-2;
    c.max_step = 1.0;
    const auto tr = kpv::integrate([](double t, const State& x) { return State{x[0] * std::cos(t)}; }, {1.0},
                                   0.0, 5.0, c);
    return std::abs(tr.x.back()[0] - std::exp(std::sin(5.0)));
  };
  EXPECT_LT(err(1e-10), err(1e-6));
  EXPECT_LT(err(1e-6), err(1e-3));
}

TEST(Integrate, GuardTripsOnASignChange) {
  IntegratorConfig c;
  try {
    (void)kpv::integrate([](double, const State&) { return State{1.0}; }, {-1.0}, 0.0, 3.0, c,
                         [](double, const State& x) { return std::vector<double>{x[0]}; });
    FAIL();
  } catch (const kpv::GuardTrip& g) {
    EXPECT_LE(g.t(), 1.0 + 1e-9);
    EXPECT_GT(g.t(), 0.9);
  }
}

TEST(Integrate, StepUnderflowAtABlowUp) {
  // x' = x^2 from x = 1 blows up at t = 1.
  IntegratorConfig c;
  c.max_step = 1.0;
  try {
    (void)kpv::integrate([](double, const State& x) { return State{x[0] * x[0]}; }, {1.0}, 0.0, 2.0, c);
    FAIL();
  } catch (const kpv::StepUnderflow& e) {
    EXPECT_NEAR(e.t(), 1.0, 1e-3);
  } catch (const kpv::GuardTrip&) {
  }
}

TEST(Integrate, OriginalSystemMatchesOracle) {
  const auto& s = kpv::get_system("original");
  const IntegratorConfig c;
  const auto tr = kpv::integrate_planar(s, oracle_state(2, Rational(0), Rational(1), 1), 1.0, 2.0,
                                        original_params(2, 0.0, 1), c);
  const State ref = oracle_state(2, Rational(0), Rational(2), 1);
  for (int i = 0; i < 2; ++i) EXPECT_LT(oracle::rel_err(tr.x.back()[i], ref[i]), 1e-7);
  // Intermediate rational checkpoints as well.
  for (int k = 1; k < 10; ++k) {
    const Rational t = Rational(1) + Rational(k, 10);
    const State at = tr.at(t.to_double());
    const State want = oracle_state(2, Rational(0), t, 1);
    EXPECT_LT(oracle::rel_err(at[0], want[0]), 1e-7) << t;
    EXPECT_LT(oracle::rel_err(at[1], want[1]), 1e-7) << t;
  }
}

TEST(Integrate, MismatchedIndexDoesNotMatch) {
  // Initial data for n = 1 integrated with n = 2 in the field drifts away.
  const auto& s = kpv::get_system("original");
  const auto tr = kpv::integrate_planar(s, oracle_state(3, Rational(1, 2), Rational(1), 1), 1.0, 2.0,
                                        original_params(3, 0.5, 2), IntegratorConfig{});
  const State ref = oracle_state(3, Rational(1, 2), Rational(2), 1);
  EXPECT_GT(std::max(oracle::rel_err(tr.x.back()[0], ref[0]), oracle::rel_err(tr.x.back()[1], ref[1])), 1e-3);
}

TEST(Integrate, SelfComparison) {
  const auto& s = kpv::get_system("original");
  const auto p = original_params(2, 0.0, 1);
  const auto x0 = oracle_state(2, Rational(0), Rational(1), 1);
  const auto a = kpv::integrate_planar(s, x0, 1.0, 2.0, p, IntegratorConfig{});
  IntegratorConfig fine;
  fine.rtol = 1e-12;
  fine.atol = 1e-14;
  const auto b = kpv::integrate_planar(s, x0, 1.0, 2.0, p, fine);
  const auto cmp = kpv::compare_trajectories(a, [&](double t) { return b.at(t); }, 1e-8);
  EXPECT_TRUE(cmp.passed);
  EXPECT_LT(cmp.max_deviation, 1e-8);
}

TEST(Integrate, SecondOrderJets) {
  // y'' = -y with y(0) = 0, y'(0) = 1.
  const auto tr = kpv::integrate_second_order(kpv::parse_expr("-y"), 0.0, 1.0, 0.0, 1.0, {}, IntegratorConfig{});
  const auto jets = kpv::trajectory_jets(tr);
  ASSERT_EQ(jets.size(), tr.size());
  for (std::size_t i = 0; i < jets.size(); ++i) {
    EXPECT_NEAR(jets[i].v, std::sin(tr.t[i]), 1e-9);
    EXPECT_NEAR(jets[i].d1, std::cos(tr.t[i]), 1e-9);
    EXPECT_NEAR(jets[i].d2, -std::sin(tr.t[i]), 1e-9);
  }
}

TEST(Integrate, CsvHeaderAndRows) {
  const auto& s = kpv::get_system("original");
  const auto tr = kpv::integrate_planar(s, oracle_state(2, Rational(0), Rational(1), 1), 1.0, 1.1,
                                        original_params(2, 0.0, 1), IntegratorConfig{});
  std::ostringstream plain, deriv;
  kpv::write_csv(tr, plain);
  kpv::write_csv(tr, deriv, true);
  std::istringstream in(plain.str());
  std::string header, row;
  std::getline(in, header);
  EXPECT_EQ(header, "t,coord1,coord2");
  std::getline(in, row);
  EXPECT_EQ(row.substr(0, 2), "1,");
  EXPECT_EQ(deriv.str().substr(0, deriv.str().find('\n')), "t,coord1,coord2,d1,d2");
}
