#include <gtest/gtest.h>

#include "kpv/catalogue.hpp"
#include "kpv/errors.hpp"
#include "kpv/hamiltonian.hpp"
#include "kpv/parse.hpp"
#include "oracles.hpp"

using kpv::Binding;

TEST(Hamiltonian, AllEntriesVerifyExactly) {
  EXPECT_EQ(kpv::all_hamiltonians().size(), 6u);
  for (const auto& id : kpv::all_hamiltonians()) {
    const auto r = kpv::verify_hamiltonian(id, 50, 3);
    EXPECT_TRUE(r.passed()) << id << ": " << r.stats.first_failure;
    EXPECT_EQ(r.stats.samples, 50);
    EXPECT_TRUE(kpv::verify_hamiltonian_shifted(id, 50, 3).passed()) << id;
  }
}

TEST(Hamiltonian, GradientsByFiniteDifferences) {
  // prefactor * c1' = dH/dc2 and prefactor * c2' = -dH/dc1, checked in double.
  kpv::RationalSampler rs(5);
  for (const auto& id : kpv::all_hamiltonians()) {
    const auto& e = kpv::get_hamiltonian(id);
    const auto& s = kpv::get_system(e.target);
    int good = 0;
    for (int tries = 0; tries < 200 && good < 10; ++tries) {
      Binding<double> b;
      for (const auto& name : kpv::parameter_names()) b[name] = rs.draw().to_double() / 10.0;
      b["t"] = 0.5 + std::abs(b["t"]);
      b[e.first] = rs.draw().to_double() / 10.0;
      b[e.second] = rs.draw().to_double() / 10.0;
      try {
        const double k = kpv::evaluate(e.prefactor, b);
        const double f1 = kpv::evaluate(s.rhs1(), b), f2 = kpv::evaluate(s.rhs2(), b);
        const double dq = oracle::partial(e.H, b, e.first, 1e-6);
        const double dp = oracle::partial(e.H, b, e.second, 1e-6);
        const bool first_is_c1 = e.first == s.chart[0];
        const double first_dot = first_is_c1 ? f1 : f2, second_dot = first_is_c1 ? f2 : f1;
        EXPECT_LT(oracle::rel_err(k * first_dot, dp), 1e-5) << id;
        EXPECT_LT(oracle::rel_err(k * second_dot, -dq), 1e-5) << id;
        ++good;
      } catch (const kpv::DivisionByZero&) {
      }
    }
    EXPECT_EQ(good, 10) << id;
  }
}

TEST(Hamiltonian, DisplayedFormsFail) {
  auto h12 = kpv::get_hamiltonian("H12");
  h12.H = kpv::displayed_h12();
  EXPECT_FALSE(kpv::verify_hamiltonian(h12, 50, 3).passed());
  auto h32 = kpv::get_hamiltonian("H32");
  h32.H = kpv::displayed_h32();
  EXPECT_FALSE(kpv::verify_hamiltonian(h32, 50, 3).passed());
}

TEST(Hamiltonian, SignFlipFails) {
  auto h = kpv::get_hamiltonian("H55");
  h.H = -h.H;
  EXPECT_FALSE(kpv::verify_hamiltonian(h, 50, 3).passed());
}

TEST(Hamiltonian, PrefactorMatters) {
  auto h = kpv::get_hamiltonian("Hqp");
  h.prefactor = kpv::Expr(1);
  EXPECT_FALSE(kpv::verify_hamiltonian(h, 50, 3).passed());
}

TEST(Hamiltonian, UnknownId) { EXPECT_THROW(kpv::get_hamiltonian("H99"), kpv::UnknownId); }
