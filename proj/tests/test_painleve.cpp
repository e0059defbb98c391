#include <gtest/gtest.h>

#include "kpv/catalogue.hpp"
#include "kpv/errors.hpp"
#include "kpv/painleve.hpp"
#include "kpv/parse.hpp"
#include "oracles.hpp"

using kpv::Binding;
using kpv::Mode;
using kpv::PVJet;
using kpv::PVSet;
using kpv::Rational;
using kpv::Scalar;

namespace {

Binding<Scalar> exact_params(const Binding<Rational>& b) {
  Binding<Scalar> out;
  for (const auto& [k, v] : b) out[k] = Scalar(v);
  return out;
}

// A jet on a PV solution: y'' is taken from the equation itself.
PVJet pv_jet(const Binding<Rational>& b, const kpv::PVValues& p) {
  PVJet j{b.at("t"), b.at("y"), b.at("yp"), Scalar(Rational(0))};
  j.ypp = kpv::pv_rhs(j.t, j.y, j.yp, p);
  return j;
}

}  // namespace

TEST(PV, SetNamesAndAliases) {
  for (auto s : kpv::all_pv_sets()) EXPECT_EQ(kpv::pv_set_from_name(kpv::pv_set_name(s)), s);
  EXPECT_EQ(kpv::pv_set_from_name("uv54"), PVSet::kUV11);
  EXPECT_EQ(kpv::pv_set_from_name("UV22"), PVSet::kUV21);
  EXPECT_EQ(kpv::pv_set_from_name("UV32"), PVSet::kUV31);
  EXPECT_THROW(kpv::pv_set_from_name("UV99"), kpv::UnknownId);
}

TEST(PV, ParameterSetsAtAPoint) {
  const Binding<Scalar> b = exact_params({{"n", Rational(1)}, {"N", Rational(3)}, {"alpha", Rational(1, 3)}});
  const auto v = kpv::evaluate_params(kpv::pv_params_for(PVSet::kUV11), b, Mode::kExact);
  EXPECT_EQ(v.a5, Scalar(Rational(1, 2)));
  EXPECT_EQ(v.b5, Scalar(Rational(-1, 18)));
  EXPECT_EQ(v.g5, Scalar(Rational(-17, 3)));
  EXPECT_EQ(v.d5, Scalar(Rational(-1, 2)));
  const auto r = kpv::evaluate_roots(kpv::pv_roots_for(PVSet::kUV11), b, Mode::kExact);
  EXPECT_EQ(r.c * r.c, Scalar(Rational(2)) * v.a5);
  EXPECT_EQ(r.a * r.a, Scalar(Rational(-2)) * v.b5);
  EXPECT_EQ(r.k * r.k, Scalar(Rational(-2)) * v.d5);
}

TEST(PV, RhsMatchesHandWrittenEquation) {
  kpv::RationalSampler rs(1);
  for (int i = 0; i < 50; ++i) {
    const double t = 0.3 + std::abs(rs.draw().to_double()), y = rs.draw().to_double() / 7.0 + 2.0;
    const double yp = rs.draw().to_double();
    const kpv::PVValues p{rs.draw().to_double(), rs.draw().to_double(), rs.draw().to_double(), -0.5};
    const double lib = kpv::pv_rhs(t, y, yp, p).to_double();
    const double ref = oracle::pv_rhs(t, y, yp, p.a5.to_double(), p.b5.to_double(), p.g5.to_double(), -0.5);
    EXPECT_LT(oracle::rel_err(lib, ref), 1e-13);
  }
  const kpv::PVValues p{1.0, 1.0, 1.0, -0.5};
  EXPECT_THROW(kpv::pv_rhs(1.0, 1.0, 0.5, p), kpv::SingularLocus);
  EXPECT_THROW(kpv::pv_rhs(1.0, 0.0, 0.5, p), kpv::SingularLocus);
  EXPECT_THROW(kpv::pv_rhs(0.0, 2.0, 0.5, p), kpv::SingularLocus);
}

TEST(Backlund, ParamsExample) {
  const kpv::PVValues p{Rational(1, 2), Rational(-1, 2), Rational(0), Rational(-1, 2)};
  const auto q = kpv::backlund_params(p, {1, 1, 1});
  EXPECT_EQ(q.a5, Scalar(Rational(1, 8)));
  EXPECT_EQ(q.b5, Scalar(Rational(-1, 8)));
  EXPECT_EQ(q.g5, Scalar(Rational(0)));
  EXPECT_EQ(q.d5, Scalar(Rational(-1, 2)));
}

TEST(Backlund, ExactRootsRequirePerfectSquares) {
  const kpv::PVValues p{Rational(1), Rational(-1, 2), Rational(0), Rational(-1, 2)};
  EXPECT_THROW(kpv::positive_roots(p), kpv::Error);
  const kpv::PVValues f{1.0, -0.5, 0.0, -0.5};
  EXPECT_NEAR(kpv::positive_roots(f).c.to_double(), std::sqrt(2.0), 1e-15);
}

TEST(Backlund, SignsValidated) {
  EXPECT_THROW((kpv::BacklundSigns{1, 0, 1}.validate()), kpv::Error);
  EXPECT_EQ((kpv::BacklundSigns{1, -1, 1}.str()), "T(+1,-1,+1)");
}

TEST(Backlund, EveryStepMapsSolutionsToSolutions) {
  // For each sign choice, the image jet satisfies PV with the new parameters.
  kpv::RationalSampler rs(41);
  const auto roots0 = kpv::pv_roots_for(PVSet::kUV11);
  const auto params0 = kpv::pv_params_for(PVSet::kUV11);
  for (int e1 : {1, -1})
    for (int e2 : {1, -1})
      for (int e3 : {1, -1}) {
        const kpv::BacklundSigns s{e1, e2, e3};
        int ok = 0;
        for (int tries = 0; tries < 200 && ok < 10; ++tries) {
          const auto b = rs.draw_binding({"n", "N", "alpha", "t", "y", "yp"});
          try {
            const auto sb = exact_params(b);
            const auto p = kpv::evaluate_params(params0, sb, Mode::kExact);
            const auto r = kpv::evaluate_roots(roots0, sb, Mode::kExact);
            const auto out = kpv::backlund_apply(pv_jet(b, p), p, r, s);
            EXPECT_TRUE(kpv::pv_residual(out.jet, out.params).is_zero()) << s.str();
            ++ok;
          } catch (const kpv::DivisionByZero&) {
          } catch (const kpv::SingularLocus&) {
          }
        }
        EXPECT_EQ(ok, 10) << s.str();
      }
}

TEST(Backlund, CompositionsLandOnTargets) {
  for (const auto& c : kpv::compositions()) {
    kpv::IntegratorConfig cfg;
    const auto rep = kpv::verify_composition(c.id, 50, 7, cfg);
    EXPECT_TRUE(rep.chain.passed()) << c.id;
    EXPECT_TRUE(rep.closed_form.passed()) << c.id;
    EXPECT_TRUE(rep.trajectory.passed()) << c.id << " " << rep.trajectory.max_residual;
    EXPECT_LT(rep.target_deviation, 1e-6) << c.id;
  }
}

TEST(Backlund, FlippedFactorMissesTarget) {
  const auto& c = kpv::get_composition("UV11_to_UV21");
  auto pr = std::make_pair(kpv::pv_params_for(c.source), kpv::pv_roots_for(c.source));
  auto factors = c.factors;
  factors[0].e3 = -factors[0].e3;
  for (const auto& f : factors) pr = kpv::backlund_step(pr.first, pr.second, f);
  const auto target = kpv::pv_params_for(c.target);
  const auto st = kpv::check_identity({"n", "N", "alpha"}, 20, 3, [&](const Binding<Rational>& b) {
    return kpv::abs(kpv::evaluate(pr.first.a5 - target.a5, b)) + kpv::abs(kpv::evaluate(pr.first.b5 - target.b5, b)) +
           kpv::abs(kpv::evaluate(pr.first.g5 - target.g5, b));
  });
  EXPECT_FALSE(st.passed());
}

TEST(Mobius, ExactReductions) {
  EXPECT_EQ(kpv::mobius_reductions().size(), 10u);
  for (const auto& m : kpv::mobius_reductions()) {
    const auto r = kpv::mobius_reduce(m.id, 50, 19);
    EXPECT_TRUE(r.passed()) << m.id << ": " << r.stats.first_failure;
    EXPECT_EQ(r.stats.samples, 50);
  }
}

TEST(Mobius, ShiftRederivedByHand) {
  // Push a PV jet through the shift and feed the reduction directly.
  auto residual = [](const kpv::MobiusReduction& m, const kpv::Expr& forward, const Binding<Rational>& b0) {
    Binding<Rational> b = b0;
    if (m.alpha_zero) b["alpha"] = Rational(0);
    const auto p = kpv::evaluate_params(kpv::pv_params_for(m.params), exact_params(b), Mode::kExact);
    const PVJet j = pv_jet(b, p);
    const auto Y = kpv::evaluate_jet(forward, Binding<kpv::Jet2<Rational>>{
                                                  {"y", {j.y.rational(), j.yp.rational(), j.ypp.rational()}}});
    Binding<Rational> ob = b;
    ob["y"] = Y.v;
    ob["yp"] = Y.d1;
    return Y.d2 - kpv::evaluate(kpv::get_ode2(m.ode).rhs, ob);
  };
  const std::vector<std::string> names{"n", "N", "alpha", "t", "y", "yp"};
  for (const auto& m : kpv::mobius_reductions()) {
    const auto good = kpv::check_identity(names, 30, 23, [&](const Binding<Rational>& b) {
      return residual(m, m.forward, b);
    });
    EXPECT_TRUE(good.passed()) << m.id;
    const auto bad = kpv::check_identity(names, 30, 23, [&](const Binding<Rational>& b) {
      return residual(m, m.forward + kpv::Expr(2), b);
    });
    EXPECT_FALSE(bad.passed()) << m.id;
  }
}

TEST(Mobius, ForwardAndInverseAreInverse) {
  for (const auto& m : kpv::mobius_reductions()) {
    const auto comp = kpv::substitute(m.inverse, "y", m.forward);
    const auto st = kpv::check_identity({"y"}, 20, 29, [&](const Binding<Rational>& b) {
      return kpv::evaluate(comp, b) - b.at("y");
    });
    EXPECT_TRUE(st.passed()) << m.id;
  }
}

TEST(Mobius, TrajectoriesSatisfyPV) {
  kpv::IntegratorConfig cfg;
  for (const auto& m : kpv::mobius_reductions()) {
    const auto r = kpv::mobius_trajectory_check(m.id, cfg);
    EXPECT_TRUE(r.passed()) << m.id << " residual " << r.max_residual << " " << r.detail;
    EXPECT_GT(r.t1, r.t0);
  }
}
