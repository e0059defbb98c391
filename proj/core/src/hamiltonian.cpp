#include "kpv/hamiltonian.hpp"

#include "kpv/errors.hpp"
#include "kpv/parse.hpp"

namespace kpv {

namespace {

constexpr const char* kH12Displayed =
    "(V12 (N U12 (V12 (n - 2 N - 2) - N U12 (V12 - 1)^2 + alpha - n + 2 N - t + 2)))/(N t)"
    " - ((N+1) (-n + N + 1))/(N t)";
constexpr const char* kH32Displayed =
    "(-N U32 (V32 (V32 (alpha - n + N + 1) - alpha + n - 2 N + t - 2) + N + 1) + alpha V32 (n - N - 1)^2)/(N t)"
    " - (N^2 U32^2 V32 (V32 - 1))/(N t)";

struct Registry {
  std::vector<std::string> ids;
  std::vector<HamiltonianEntry> entries;
};

const Registry& registry() {
  static const Registry kReg = [] {
    Registry r;
    auto add = [&r](const char* id, SystemId target, const char* h, const char* prefactor) {
      const PlanarSystem& s = get_system(target);
      r.entries.push_back({id, target, s.chart[0], s.chart[1], parse_expr(h), parse_expr(prefactor)});
      r.ids.emplace_back(id);
    };
    add("H12", SystemId::kUV12,
        "(V12 (N U12 (V12 (n - 2 N - 2) - N U12 (V12 - 1)^2 + alpha - n + 2 N - t + 2)))/(N t)"
        " - ((N+1) (-n + N + 1) V12)/(N t) - alpha U12/t",
        "1");
    add("H22", SystemId::kUV22,
        "(N U22 (-V22 (-alpha + n + 2 N + t + 2) + V22^2 (n + N + 1) - alpha + N + 1) - n (N+1) V22)/(N t)"
        " - (N^2 U22^2 V22 (V22 - 1)^2)/(N t)",
        "1");
    add("H32", SystemId::kUV32,
        "(-N U32 (V32 (V32 (alpha - n + N + 1) - alpha + n - 2 N + t - 2) + N + 1) + alpha V32 (n - N - 1))/(N t)"
        " - (N^2 U32^2 V32 (V32 - 1)^2)/(N t)",
        "1");
    add("H55", SystemId::kUv55,
        "(v55 (-u55 (v55 (n - 2 N) + N u55 (v55 - 1)^2 + alpha - n + 2 N - t) + n - N) + alpha u55)/t", "1");
    add("H12b", SystemId::kUv12b,
        "(v12b (u12b (alpha + n - u12b (N v12b + t) + N v12b + t) - alpha))/t + u12b/N + u12b", "1");
    add("Hqp", SystemId::kOriginal,
        "(N p q (alpha + n - 2 N - t - 2) + N p^2 (n - N q) - q ((N+1) (-alpha + N + 1) + N t q))/(N t (p + q))",
        "1/(p + q)");
    return r;
  }();
  return kReg;
}

}  // namespace

const std::vector<std::string>& all_hamiltonians() { return registry().ids; }

const HamiltonianEntry& get_hamiltonian(const std::string& id) {
  for (const auto& e : registry().entries) {
    if (e.id == id) return e;
  }
  throw UnknownId("Hamiltonian '" + id + "'");
}

Expr displayed_h12() { return parse_expr(kH12Displayed); }
Expr displayed_h32() { return parse_expr(kH32Displayed); }

HamiltonianReport verify_hamiltonian(const HamiltonianEntry& e, int samples, std::uint64_t seed) {
  const PlanarSystem& s = get_system(e.target);
  // prefactor * rhs must equal the symplectic gradient of H.
  const Expr d_first = differentiate(e.H, e.first);
  const Expr d_second = differentiate(e.H, e.second);
  const std::vector<Expr> parts{s.num1, s.den1, s.num2, s.den2, e.prefactor, d_first, d_second};
  std::vector<std::string> names = parameter_names();
  names.push_back(e.first);
  names.push_back(e.second);
  HamiltonianReport rep{e.id, {}};
  rep.stats = check_identity(names, samples, seed, [&](const Binding<Rational>& b) {
    const auto v = evaluate_all(parts, b);
    if (v[1].is_zero() || v[3].is_zero()) throw SingularLocus("system denominator vanishes");
    const Rational r1 = v[4] * v[0] / v[1] - v[6];
    const Rational r2 = v[4] * v[2] / v[3] + v[5];
    return abs(r1) + abs(r2);
  });
  return rep;
}

HamiltonianReport verify_hamiltonian(const std::string& id, int samples, std::uint64_t seed) {
  return verify_hamiltonian(get_hamiltonian(id), samples, seed);
}

HamiltonianReport verify_hamiltonian_shifted(const std::string& id, int samples, std::uint64_t seed) {
  HamiltonianEntry e = get_hamiltonian(id);
  e.H = e.H + pow(sym("t"), 3);
  return verify_hamiltonian(e, samples, seed);
}

}  // namespace kpv
