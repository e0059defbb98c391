#include <gtest/gtest.h>

#include <set>

#include "kpv/errors.hpp"
#include "kpv/expr.hpp"
#include "kpv/parse.hpp"
#include "kpv/sampling.hpp"

using kpv::Binding;
using kpv::Expr;
using kpv::Mode;
using kpv::Rational;
using kpv::Scalar;
using kpv::parse_expr;
using kpv::sym;

namespace {

Rational at(const Expr& e, const Binding<Rational>& b) { return kpv::evaluate(e, b); }

}  // namespace

TEST(Parse, PrecedenceAndUnaryMinus) {
  const Binding<Rational> b{{"x", Rational(3)}, {"y", Rational(-2)}};
  EXPECT_EQ(at(parse_expr("1 + 2*x^2"), b), Rational(19));
  EXPECT_EQ(at(parse_expr("-x^2"), b), Rational(-9));
  EXPECT_EQ(at(parse_expr("(x - y)/(x + y)"), b), Rational(5));
  EXPECT_EQ(at(parse_expr("x - y - 1"), b), Rational(4));
  EXPECT_EQ(at(parse_expr("x/y/2"), b), Rational(-3, 4));
}

TEST(Parse, ImplicitMultiplication) {
  const Binding<Rational> b{{"t", Rational(2)}, {"N", Rational(5)}, {"v", Rational(1, 5)}};
  EXPECT_EQ(at(parse_expr("2 t"), b), Rational(4));
  EXPECT_EQ(at(parse_expr("N t (1 + N v)^2"), b), Rational(40));
  EXPECT_EQ(at(parse_expr("(t + 1)(t - 1)"), b), Rational(3));
}

TEST(Parse, RejectsMalformedInput) {
  EXPECT_THROW(parse_expr("1 +"), kpv::ParseError);
  EXPECT_THROW(parse_expr("(x"), kpv::ParseError);
  EXPECT_THROW(parse_expr("x $ y"), kpv::ParseError);
  EXPECT_THROW(parse_expr(""), kpv::ParseError);
}

TEST(Expr, InfixRoundTrip) {
  for (const char* s : {"(x - 1)^2/(x + y)", "-(t - x y)^3 + 1/2", "x^-2 - 3/7 y"}) {
    const Expr e = parse_expr(s);
    const Expr back = parse_expr(kpv::to_infix(e));
    kpv::RationalSampler rs(7);
    for (int i = 0; i < 20; ++i) {
      const auto b = rs.draw_binding({"x", "y", "t"});
      try {
        EXPECT_EQ(at(e, b), at(back, b)) << s;
      } catch (const kpv::DivisionByZero&) {
      }
    }
  }
}

TEST(Expr, UnboundSymbol) {
  try {
    (void)at(parse_expr("x + z"), {{"x", Rational(1)}});
    FAIL();
  } catch (const kpv::UnboundSymbol& e) {
    EXPECT_EQ(e.name(), "z");
  }
}

TEST(Expr, DivisionByZeroNamesTheDenominator) {
  try {
    (void)at(parse_expr("1/(x - 1)"), {{"x", Rational(1)}});
    FAIL();
  } catch (const kpv::DivisionByZero& e) {
    EXPECT_NE(e.where().find('x'), std::string::npos);
  }
}

TEST(Expr, SymbolsAndDenominators) {
  const Expr e = parse_expr("a/(b - 1) + c^-2");
  EXPECT_EQ(kpv::symbols(e), (std::set<std::string>{"a", "b", "c"}));
  EXPECT_EQ(kpv::denominators(e).size(), 2u);
}

TEST(Expr, DerivativeMatchesHandDerivative) {
  const Expr f = parse_expr("x^3 y / (x + y) - x/y");
  const Expr hand = parse_expr("(3 x^2 y (x + y) - x^3 y)/(x + y)^2 - 1/y");
  const auto st = kpv::check_identity({"x", "y"}, 50, 11, [&](const Binding<Rational>& b) {
    return at(kpv::differentiate(f, "x"), b) - at(hand, b);
  });
  EXPECT_TRUE(st.passed());
  EXPECT_EQ(st.samples, 50);
}

TEST(Expr, Substitute) {
  const Expr e = parse_expr("x^2 + y");
  const Expr s = kpv::substitute(e, "x", parse_expr("y - 1"));
  EXPECT_EQ(at(s, {{"y", Rational(4)}}), Rational(13));
}

TEST(Expr, ScalarModesAndJets) {
  const Expr e = parse_expr("x^2/(1 + x)");
  const Binding<Scalar> exact{{"x", Scalar(Rational(1, 2))}};
  const Binding<Scalar> flt{{"x", Scalar(0.5)}};
  EXPECT_EQ(kpv::evaluate(e, exact, Mode::kExact), Scalar(Rational(1, 6)));
  EXPECT_NEAR(kpv::evaluate(e, flt, Mode::kFloat).to_double(), 1.0 / 6.0, 1e-15);
  EXPECT_THROW((void)kpv::evaluate(e, flt, Mode::kExact), kpv::ModeMismatch);

  // x = t at t = 1/2: d/dt x^2/(1+x) = (x^2 + 2x)/(1+x)^2, second = 2/(1+x)^3.
  const Binding<kpv::Jet2<Rational>> jb{{"x", {Rational(1, 2), Rational(1), Rational(0)}}};
  const auto j = kpv::evaluate_jet(e, jb);
  EXPECT_EQ(j.v, Rational(1, 6));
  EXPECT_EQ(j.d1, Rational(5, 9));
  EXPECT_EQ(j.d2, Rational(16, 27));
}

TEST(Sampling, SeededAndInRange) {
  kpv::RationalSampler a(99), b(99);
  for (int i = 0; i < 200; ++i) {
    const Rational r = a.draw();
    EXPECT_EQ(r, b.draw());
    EXPECT_LE(kpv::abs(r), Rational(99));
  }
  EXPECT_NE(kpv::derive_seed(1, "a"), kpv::derive_seed(1, "b"));
  EXPECT_EQ(kpv::derive_seed(1, "a"), kpv::derive_seed(1, "a"));
}

TEST(Sampling, DetectsFalseIdentity) {
  // (x+1)^2 = x^2 + 1 is false; one sample is enough to notice.
  const auto st = kpv::check_identity({"x"}, 50, 5, [](const Binding<Rational>& b) {
    const Rational x = b.at("x");
    return (x + 1) * (x + 1) - (x * x + 1);
  });
  EXPECT_FALSE(st.passed());
  EXPECT_GT(st.failures, 40);
}

TEST(Sampling, ResamplesOnPoles) {
  const auto st = kpv::check_identity({"x"}, 50, 3, [](const Binding<Rational>& b) {
    if (b.at("x").is_zero()) throw kpv::DivisionByZero("x");
    return Rational(0);
  });
  EXPECT_TRUE(st.passed());
  EXPECT_EQ(st.samples, 50);
}
