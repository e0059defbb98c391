#include "kpv/catalogue.hpp"

#include <map>

#include "json.hpp"
#include "kpv/errors.hpp"
#include "kpv/parse.hpp"

namespace kpv {

namespace {

struct SystemSpec {
  SystemId id;
  const char* name;
  const char* c1;
  const char* c2;
  std::string num1, den1, num2, den2;
};

std::string neg(const std::string& s) { return "-(" + s + ")"; }

// Polynomials too long to inline in the table.
const std::string kR1_41 =
    "U41 (U41 (N V41 (2 (-alpha - N (alpha + 2 n - 2) + n (alpha + n + t - 2) + N^2 + 1) + N V41 "
    "(alpha + n - 2 N + 2 t - 2)) + n (-n + N + 1) (-alpha - n + N + 1)) + N^2 (-alpha - 2 n - 2 N "
    "V41 + 2 N + t + 2) + t U41^2 V41^2 (n + N V41)^2)";
const std::string kR2_41 =
    "U41 V41 (n + N V41) (U41 ((-n + N + 1) (-alpha - n + N + 1) + N V41 (alpha + n - 2 N - 2)) - 2 "
    "N^2) - N^3";
const std::string kR1_42 =
    "N u42 (-alpha + 2 n t + N^2 - alpha N + 2 N t v42 + 2 N + 1) + t (n + N v42)^2 + N^3 u42^3 + "
    "N^2 u42^2 (-alpha + 2 N + t + 2)";
const std::string kR2_42 =
    "-N v42 (alpha - 2 n^2 - 2 alpha n + N (alpha + 4 n - 2) + 2 n N u42 + 4 n + N^2 u42^2 - N^2 - "
    "1) + N^2 v42^2 (alpha + n - 2 N u42 - 2 N - 2) + n (-n + N + 1) (-alpha - n + N + 1)";
const std::string kR1_54b =
    "u54b (N v54b (-alpha + 2 n t - n + 2 N + 2 t + 1) + N^2 (t + 1) + (N+1) t v54b^2 (-alpha + N + "
    "1)) + N (N - n) (-alpha - n + N) + N (t - 1) t u54b^2 v54b^2";
const std::string kR2_54b =
    "N v54b^2 (alpha^2 - 2 alpha + n^2 + 2 alpha n + N (-4 alpha - 4 n + 2 t + 4) - 2 n + 4 N^2 - 2 "
    "N t u54b - alpha t + 2 t + 1) + N^2 v54b (-2 alpha - 2 n + 4 N + t + 2) + t v54b^3 ((N+1) "
    "(-alpha + N + 1) - 2 N u54b (-alpha - n + 2 N + 1)) + N^3 + N t^2 u54b^2 v54b^4";
const std::string kD54b = "N t (v54b (-alpha - n + 2 N + 1) + N - t u54b v54b^2)";
const std::string kR1_55b =
    "-u55b (alpha^2 - alpha + n^2 + 2 alpha n + N (-4 alpha - 4 n + 2 t + 2) + N v55b (-2 alpha - 2 "
    "n + 4 N + 1) - 2 n t - n + N^2 v55b^2 + 4 N^2 - alpha t) + (N - n) (-alpha - n + N) + t u55b^2 "
    "(-2 alpha - 2 n + 2 N v55b + 4 N + t + 1) - t^2 u55b^3";
const std::string kR2_55b =
    "N v55b (alpha^2 - 2 alpha + n^2 + 2 alpha n + N (-4 alpha - 4 n + 2 t + 4) - 2 t u55b (-alpha - "
    "n + 2 N + 1) - 2 n + 4 N^2 + t^2 u55b^2 - alpha t + 2 t + 1) + N^2 v55b^2 (-2 alpha - 2 n + 4 N "
    "- 2 t u55b + t + 2) + N^3 v55b^3 + (N+1) t (-alpha + N + 1)";
const std::string kR1_56b =
    "u56b (N v56b (-alpha + 2 n t - n + 2 N + 2 t + 1) + N^2 (t + 1) + t v56b^2 ((N+1) (-alpha + N + "
    "1) + N (t - 1) u56b)) + N (N - n) (-alpha - n + N)";
const std::string kR2_56b =
    "v56b (v56b (N (alpha^2 + n^2 + 2 (alpha - 1) n + 2 N (-2 alpha - 2 n + t + 2) + 4 N^2 - alpha (t "
    "+ 2) + 2 t + 1) + t (2 N u56b (v56b (alpha + n - 2 N - 1) - N) + N t u56b^2 v56b^2 + (N+1) v56b "
    "(-alpha + N + 1))) + N^2 (-2 alpha - 2 n + 4 N + t + 2)) + N^3";
const std::string kD56b = "N t (N - v56b (alpha + n - 2 N + t u56b v56b - 1))";
const std::string kR1_510b =
    "u510b (2 n N v510b - N^2 + (N+1) v510b^2 (-alpha + N + 1)) + N u510b^2 v510b (v510b (alpha + n "
    "- 2 N - 2) - 2 N) + n N";
const std::string kR2_510b =
    "N^2 + v510b^2 ((N+1) (-alpha + N + 1) + 2 N t u510b) + N t u510b^2 v510b^3 + N v510b (-alpha + "
    "2 N + t + 2)";

std::vector<SystemSpec> system_specs() {
  using S = SystemId;
  return {
      {S::kOriginal, "original", "q", "p",
       "N p^2 (n - N q) + 2 N p q (n - N q) + q (N q (alpha + n - 2 N - 2) + (N+1) (-alpha + N + 1))",
       "N t (p+q)",
       "2 N p q t + p ((N+1) (-alpha + N + 1) + N p (-alpha + N p + 2 N + t + 2)) + N q^2 t",
       "N t (p+q)"},
      {S::kOriginalqP, "original_qP", "q", "P",
       "N n - N^2 q + 2 N n P q - 2 N^2 P q^2 + P^2 q (N^2 - N alpha + 2 N - alpha + 1) + P^2 q^2 "
       "(N alpha + N n - 2 N^2 - 2 N)",
       "N P t (P q + 1)",
       "-N^2 (P+1)^2 - N P^3 q^2 t - 2 N P^2 q t + N P (P+1) alpha - N P t - 2 N P (P+1) + P^2 "
       "(alpha - 1)",
       "N t (P q + 1)"},
      {S::kOriginalQP, "original_QP", "Q", "P",
       "-Q (N^2 P^2 Q - 2 N^2 P^2 - 2 N^2 P - N^2 Q - N P^2 Q alpha + 2 N P^2 Q + N P^2 alpha + N "
       "P^2 n - 2 N P^2 + 2 N P Q n + N Q^2 n - P^2 Q alpha + P^2 Q)",
       "N P t (P + Q)",
       "-N^2 P^2 Q^2 - 2 N^2 P Q^2 - N^2 Q^2 - N P^3 t + N P^2 Q^2 alpha - 2 N P^2 Q^2 - 2 N P^2 Q "
       "t + N P Q^2 alpha - N P Q^2 t - 2 N P Q^2 + P^2 Q^2 alpha - P^2 Q^2",
       "N Q t (P + Q)"},
      {S::kUv11, "uv11", "u11", "v11", "n - u11^2 t - (u11 (-alpha - n + 2 N v11 + 2 N + t + 2))", "t",
       "N^2 v11^2 + (N+1) (-alpha + N + 1) + N v11 (-alpha + 2 N + t u11^2 + 2 t u11 + t + 2)",
       "N t (u11 + 1)"},
      {S::kUV11, "UV11", "U11", "V11", "U11 (-alpha - n + 2 N + t + 2) - U11^2 (n - 2 N V11) + t", "t",
       "N V11 (U11 (U11 + 2) (n - N V11) + alpha + n - 2 N - 2) + (N+1) (-alpha + N + 1)",
       "N t (U11 + 1)"},
      {S::kUv21, "uv21", "u21", "v21", "u21 (alpha + n - 2 N v21 - t) + n - N - t u21^2 - 1", "t",
       "N^2 v21^2 + alpha (N+1) - N v21 (alpha + N - t u21^2 - 2 t u21 - t + 1)", "N t (u21 + 1)"},
      {S::kUV21, "UV21", "U21", "V21", "U21^2 (-n + 2 N V21 + N + 1) - U21 (alpha + n - t) + t", "t",
       "N V21 (-U21 (U21 + 2) (N V21 - n + N + 1) + alpha + n) + alpha (N+1)", "N t (U21 + 1)"},
      {S::kTildeUV22, "tildeUV22", "Ut22", "Vt22",
       "-n Ut22 + 2 N Ut22^2 Vt22 - N Ut22^2 + 2 t Ut22 Vt22 - t Ut22", "t",
       "n Vt22 - 2 N Ut22 Vt22^2 + 2 N Ut22 Vt22 - t Vt22^2 + t Vt22 - N - 1", "t"},
      {S::kUv31, "uv31", "u31", "v31", "-u31 (alpha - n + 2 N v31 + t + t u31) + alpha + n - N - 1", "t",
       "N^2 v31^2 + alpha (alpha - N - 1) + N v31 (2 alpha - N + t u31^2 + 2 t u31 + t - 1)",
       "N t (u31 + 1)"},
      {S::kUV31, "UV31", "U31", "V31", "U31^2 (-alpha - n + 2 N V31 + N + 1) + U31 (alpha - n + t) + t",
       "t", "alpha (alpha - N - 1) - N V31 (alpha + U31 (U31 + 2) (-alpha - n + N V31 + N + 1) - n)",
       "N t (U31 + 1)"},
      {S::kUV41, "UV41", "U41", "V41", neg(kR1_41), "N t (U41 V41 (n + N V41) + N)", kR2_41,
       "N t U41 (U41 V41 (n + N V41) + N)"},
      {S::kUv42, "uv42", "u42", "v42", kR1_42, "N t (n + N u42 + N v42)", kR2_42,
       "N t (n + N u42 + N v42)"},
      {S::kUv43a, "uv43a", "u43a", "v43a",
       "u43a (-alpha - n + 2 N + t + 2) - u43a^2 (n - 2 N v43a) + t", "t",
       "N v43a (u43a (u43a + 2) (n - N v43a) + alpha + n - 2 N - 2) + (N+1) (-alpha + N + 1)",
       "N t (u43a + 1)"},
      {S::kUv43b, "uv43b", "u43b", "v43b", "u43b^2 (-n + 2 N v43b + N + 1) - u43b (alpha + n - t) + t",
       "t", "N v43b (-u43b (u43b + 2) (N v43b - n + N + 1) + alpha + n) + alpha (N+1)",
       "N t (u43b + 1)"},
      {S::kUv43c, "uv43c", "u43c", "v43c",
       "u43c^2 (-alpha - n + 2 N v43c + N + 1) + u43c (alpha - n + t) + t", "t",
       "alpha (alpha - N - 1) - N v43c (alpha + u43c (u43c + 2) (-alpha - n + N v43c + N + 1) - n)",
       "N t (u43c + 1)"},
      {S::kUv54, "uv54", "u54", "v54",
       "(N - n) (-alpha - n + N) - N u54 (-v54 (v54 + 2) (n - N u54) + alpha + n - 2 N)",
       "N t (v54 + 1)", "-n v54^2 + n v54 + 2 N u54 v54^2 - 2 N v54 - t v54 + alpha v54 - t", "t"},
      {S::kUv54b, "uv54b", "u54b", "v54b", neg(kR1_54b), kD54b, kR2_54b, kD54b},
      {S::kUv55b, "uv55b", "u55b", "v55b", kR1_55b, "t (alpha + n - N v55b - 2 N + t u55b - 1)", kR2_55b,
       "N t (alpha + n - N v55b - 2 N + t u55b - 1)"},
      {S::kUv56b, "uv56b", "u56b", "v56b", neg(kR1_56b), kD56b, kR2_56b, kD56b},
      {S::kUv510b, "uv510b", "u510b", "v510b", kR1_510b, "N t v510b (u510b v510b + 1)", neg(kR2_510b),
       "N t (u510b v510b + 1)"},
      {S::kUV12, "UV12", "U12", "V12",
       "-N U12 (V12 (-2 n + 4 N + 4) - alpha + n - 2 N + t - 2) - N^2 U12^2 (3 V12^2 - 4 V12 + 1) - "
       "(N+1) (-n + N + 1)",
       "N t",
       "V12 (2 N U12 - alpha + n - 2 N + t - 2) - V12^2 (4 N U12 + n - 2 N - 2) + 2 N U12 V12^3 + "
       "alpha",
       "t"},
      {S::kUV22, "UV22", "U22", "V22",
       "N U22 (2 V22 (n + N + 1) + alpha - n - 2 N - t - 2) - N^2 U22^2 (3 V22^2 - 4 V22 + 1) - n N - "
       "n",
       "N t",
       "V22 (2 N U22 - alpha + n + 2 N + t + 2) - V22^2 (4 N U22 + n + N + 1) + 2 N U22 V22^3 + "
       "alpha - N - 1",
       "t"},
      {S::kUV32, "UV32", "U32", "V32",
       "-(N U32 (2 V32 (alpha - n + N + 1) - alpha + n - 2 N + t - 2) + N^2 U32^2 (3 V32^2 - 4 V32 + "
       "1) + alpha (-n + N + 1))",
       "N t",
       "V32 (2 N U32 - alpha + n - 2 N + t - 2) + V32^2 (-4 N U32 + alpha - n + N + 1) + 2 N U32 "
       "V32^3 + N + 1",
       "t"},
      {S::kUv55, "uv55", "u55", "v55",
       "u55 (v55 (4 N - 2 n) - alpha + n - 2 N + t) - N u55^2 (3 v55^2 - 4 v55 + 1) + n - N", "t",
       "v55 (2 N u55 + alpha - n + 2 N - t) + v55^2 (-4 N u55 + n - 2 N) + 2 N u55 v55^3 - alpha",
       "t"},
      {S::kUv12b, "uv12b", "u12b", "v12b",
       "-alpha + n u12b - 2 N u12b^2 v12b + 2 N u12b v12b - t u12b^2 + t u12b + alpha u12b", "t",
       "-n N v12b + 2 N^2 u12b v12b^2 - N^2 v12b^2 + 2 N t u12b v12b - N t v12b - N t - alpha N v12b "
       "- t",
       "N t"},
  };
}

// (coordinate index, divisor value, exceptional values of the other coordinate)
struct DivisorSpec {
  int coord;
  const char* value;
  std::vector<const char*> exceptional;
};

std::map<SystemId, DivisorSpec> divisor_specs() {
  using S = SystemId;
  return {
      {S::kUv11, {1, "0", {"-1"}}},
      {S::kUV11, {1, "0", {"-1"}}},
      {S::kUv21, {1, "0", {"-1"}}},
      {S::kUV21, {1, "0", {"-1"}}},
      {S::kTildeUV22, {1, "0", {}}},
      {S::kUv31, {1, "0", {"-1"}}},
      {S::kUV31, {1, "0", {"-1"}}},
      {S::kUV41, {1, "0", {"0"}}},
      {S::kUv42, {1, "0", {"-n/N"}}},
      {S::kUv43a, {1, "0", {"-1"}}},
      {S::kUv43b, {1, "0", {"-1"}}},
      {S::kUv43c, {1, "0", {"-1"}}},
      {S::kUv54, {1, "0", {}}},
      {S::kUv54b, {1, "0", {}}},
      {S::kUv55b, {1, "0", {"(1 + 2 N - alpha - n)/t"}}},
      {S::kUv56b, {1, "0", {}}},
      {S::kUv510b, {1, "0", {}}},
      {S::kUV12, {1, "0", {}}},
      {S::kUV22, {1, "0", {}}},
      {S::kUV32, {1, "0", {}}},
      {S::kUv55, {1, "0", {}}},
      {S::kUv12b, {0, "0", {}}},
  };
}

struct Registry {
  std::vector<SystemId> ids;
  std::map<SystemId, PlanarSystem> systems;
  std::map<std::string, SystemId> by_name;
};

const Registry& registry() {
  static const Registry reg = [] {
    Registry r;
    const auto divisors = divisor_specs();
    for (const auto& sp : system_specs()) {
      PlanarSystem s{sp.id,
                     sp.name,
                     {sp.c1, sp.c2},
                     parse_expr(sp.num1),
                     parse_expr(sp.den1),
                     parse_expr(sp.num2),
                     parse_expr(sp.den2),
                     std::nullopt,
                     sp.id == SystemId::kTildeUV22};
      if (auto it = divisors.find(sp.id); it != divisors.end()) {
        Divisor d;
        d.coord = it->second.coord;
        d.value = parse_expr(it->second.value);
        for (const char* e : it->second.exceptional) d.exceptional.push_back(parse_expr(e));
        s.divisor = std::move(d);
      }
      r.ids.push_back(sp.id);
      r.by_name.emplace(s.name, sp.id);
      r.systems.emplace(sp.id, std::move(s));
    }
    return r;
  }();
  return reg;
}

template <class T>
std::pair<T, T> rhs_impl(const PlanarSystem& s, detail::Evaluator<T>& ev) {
  const T d1 = ev(s.den1);
  if (detail::value_is_zero(d1)) throw SingularLocus(s.name + ": " + to_infix(s.den1) + " = 0");
  const T d2 = ev(s.den2);
  if (detail::value_is_zero(d2)) throw SingularLocus(s.name + ": " + to_infix(s.den2) + " = 0");
  return {ev(s.num1) / d1, ev(s.num2) / d2};
}

}  // namespace

const std::vector<SystemId>& all_systems() { return registry().ids; }

std::string system_name(SystemId id) { return get_system(id).name; }

SystemId system_from_name(const std::string& name) {
  const auto& r = registry();
  auto it = r.by_name.find(name);
  if (it == r.by_name.end()) throw UnknownId("system '" + name + "'");
  return it->second;
}

const PlanarSystem& get_system(SystemId id) {
  const auto& r = registry();
  auto it = r.systems.find(id);
  if (it == r.systems.end()) throw UnknownId("system #" + std::to_string(static_cast<int>(id)));
  return it->second;
}

const PlanarSystem& get_system(const std::string& name) { return get_system(system_from_name(name)); }

std::pair<Scalar, Scalar> evaluate_rhs(const PlanarSystem& s, const Binding<Scalar>& point, Mode mode) {
  detail::Evaluator<Scalar> ev(detail::lookup_in(point), [mode](const Rational& c) {
    return mode == Mode::kExact ? Scalar(c) : Scalar(c.to_double());
  });
  return rhs_impl(s, ev);
}

std::pair<Rational, Rational> evaluate_rhs(const PlanarSystem& s, const Binding<Rational>& point) {
  detail::Evaluator<Rational> ev(detail::lookup_in(point), [](const Rational& c) { return c; });
  return rhs_impl(s, ev);
}

std::pair<double, double> evaluate_rhs(const PlanarSystem& s, const Binding<double>& point) {
  detail::Evaluator<double> ev(detail::lookup_in(point), [](const Rational& c) { return c.to_double(); });
  return rhs_impl(s, ev);
}

RegularityReport check_regular_on_divisor(const PlanarSystem& s, int samples, std::uint64_t seed,
                                          std::optional<Rational> alpha) {
  RegularityReport rep;
  rep.id = s.name;
  if (!s.divisor) {
    rep.detail = "no divisor";
    return rep;
  }
  if (s.alpha_zero && !alpha) alpha = Rational(0);
  const Divisor& d = *s.divisor;
  const std::string& on = s.chart[d.coord];
  const std::string& free = s.chart[1 - d.coord];
  RationalSampler rs(seed);
  const int max_draws = 20 * samples + 100;
  int draws = 0;
  std::vector<int> zero_zero(d.exceptional.size(), 0);
  while (rep.samples < samples && draws++ < max_draws) {
    // Zero parameters are special values (n = 0 collapses exceptional points).
    Binding<Rational> b;
    for (const char* p : {"t", "n", "N", "alpha"}) b[p] = rs.draw_nonzero();
    if (alpha) b["alpha"] = *alpha;
    // Degenerate parameters (t = 0, N = 0, ...) kill a denominator identically.
    Binding<Rational> generic = b;
    generic[s.chart[0]] = rs.draw();
    generic[s.chart[1]] = rs.draw();
    if (evaluate(s.den1, generic).is_zero() || evaluate(s.den2, generic).is_zero()) {
      ++rep.resamples;
      continue;
    }
    Rational on_value;
    std::vector<Rational> excl;
    try {
      on_value = evaluate(d.value, b);
      for (const auto& e : d.exceptional) excl.push_back(evaluate(e, b));
    } catch (const DivisionByZero&) {
      ++rep.resamples;
      continue;
    }
    b[on] = on_value;
    const Rational c = rs.draw();
    bool hits_exceptional = false;
    for (const auto& e : excl) hits_exceptional |= (c == e);
    if (hits_exceptional) {
      ++rep.resamples;
      continue;
    }
    b[free] = c;
    ++rep.samples;
    if (evaluate(s.den1, b).is_zero() || evaluate(s.den2, b).is_zero()) {
      if (rep.singular++ == 0) {
        rep.detail = "denominator vanishes on " + on + " = " + on_value.str() + " at " + free + " = " +
                     c.str();
      }
    }
    // Exceptional points: a pole is allowed, 0/0 is an unresolved point.
    for (std::size_t i = 0; i < excl.size(); ++i) {
      Binding<Rational> pe = b;
      pe[free] = excl[i];
      const bool ind1 = evaluate(s.num1, pe).is_zero() && evaluate(s.den1, pe).is_zero();
      const bool ind2 = evaluate(s.num2, pe).is_zero() && evaluate(s.den2, pe).is_zero();
      if (ind1 || ind2) ++zero_zero[i];
    }
  }
  // Only a 0/0 that holds at every draw is an identity in the parameters;
  // isolated hits (N = -1, say) are special values.
  for (std::size_t i = 0; i < d.exceptional.size(); ++i) {
    if (rep.samples == 0 || zero_zero[i] < rep.samples) continue;
    if (rep.indeterminate_exceptional++ == 0 && rep.detail.empty()) {
      rep.detail = "0/0 at exceptional point " + free + " = " + to_infix(d.exceptional[i]);
    }
  }
  if (rep.samples < samples && rep.detail.empty()) rep.detail = "too many rejected samples";
  rep.passed = rep.samples == samples && rep.singular == 0 && rep.indeterminate_exceptional == 0;
  return rep;
}

namespace {

struct OdeSpec {
  const char* id;
  SystemId parent;
  int y_coord;
  const char* rhs;
  const char* displayed_elimination;  // may be null
};

const char* const kRhsUV11 =
    "((1/y + 3/2) yp^2)/(y+1) - yp/t + (y^2 (-alpha + n y + n) (alpha + n y + n))/(2 t^2 (y+1)) + "
    "(y^2 (alpha + n - 2 N - 1))/(t (y+1)) + (2 alpha + 4 y (alpha + n - 2 N - 1) + 2 n - 4 N - 5 t - "
    "2)/(2 t (y+1)) - ((y+4) y)/(2 (y+1)) - 1/((y+1) y)";
const char* const kRhsUV21 =
    "((1/y + 3/2) yp^2)/(y+1) - yp/t + (y^2 ((n - alpha) (alpha + n - 2 N - 2) + y (y+2) (-n + N + "
    "1)^2))/(2 t^2 (y+1)) + (y^2 (alpha + n + 1))/(t (y+1)) + (2 alpha + 4 y (alpha + n + 1) + 2 n - 5 "
    "t + 2)/(2 t (y+1)) - ((y+4) y)/(2 (y+1)) - 1/((y+1) y)";
const char* const kRhsUV31 =
    "((1/y + 3/2) yp^2)/(y+1) - yp/t + (y^2 ((alpha + n) (alpha + n - 2 N - 2) + y (y+2) (alpha + n - "
    "N - 1)^2))/(2 t^2 (y+1)) + (y^2 (-alpha + n + 1))/(t (y+1)) + (-2 alpha + 4 y (-alpha + n + 1) + "
    "2 n - 5 t + 2)/(2 t (y+1)) - ((y+4) y)/(2 (y+1)) - 1/((y+1) y)";
const char* const kRhsTilde =
    "((1 - 1/(2 y)) yp^2)/(y-1) - yp/t + (n y^2 (-n + 2 N + 2) - 2 (N+1)^2 y + (N+1)^2)/(2 t^2 (y-1) "
    "y) + (2 (n+1) y^2)/(t (y-1)) + (y (y (y (2 t y - 2 n - 5 t - 2) + 4 t) - 2 n - t - 2))/(2 t (y-1))";
const char* const kRhsUV12 =
    "(1/(2 y) + 1/(y-1)) yp^2 - yp/t + ((y-1)^2 ((1/2) n^2 y - alpha^2/(2 y)))/t^2 + (y (alpha + n - 2 "
    "N - 1))/t - (y (y+1))/(2 (y-1))";
const char* const kRhsUV22 =
    "(1/(2 y) + 1/(y-1)) yp^2 - yp/t + ((y-1)^2 ((1/2) y (-n + N + 1)^2 - (-alpha + N + 1)^2/(2 "
    "y)))/t^2 + (y (alpha + n + 1))/t - (y (y+1))/(2 (y-1))";
const char* const kRhsUV32 =
    "(1/(2 y) + 1/(y-1)) yp^2 - yp/t + ((y-1)^2 ((1/2) y (-alpha - n + N + 1)^2 + (-N^2 - 2 N - 1)/(2 "
    "y)))/t^2 + (y (-alpha + n + 1))/t - (y (y+1))/(2 (y-1))";

std::vector<OdeSpec> ode_specs() {
  using S = SystemId;
  return {
      {"UV11", S::kUV11, 0, kRhsUV11,
       "(t (yp - 1) + y (alpha + n - 2 N - t - 2) + n y^2)/(2 N y^2)"},
      {"UV21", S::kUV21, 0, kRhsUV21, nullptr},
      {"UV31", S::kUV31, 0, kRhsUV31, nullptr},
      {"uv54", S::kUv54, 1, kRhsUV11, nullptr},
      {"tildeUV22", S::kTildeUV22, 1, kRhsTilde, nullptr},
      {"UV12", S::kUV12, 1, kRhsUV12,
       "(y (alpha - n + 2 N - t + 2) + y^2 (n - 2 N - 2) + t yp - alpha)/(2 N (y-1)^2 y)"},
      {"UV22", S::kUV22, 1, kRhsUV22, nullptr},
      {"UV32", S::kUV32, 1, kRhsUV32, nullptr},
      {"uv55", S::kUv55, 1, kRhsUV12, nullptr},
  };
}

// The other coordinate from y' = num/den, with num affine in it.
Expr derive_elimination(const PlanarSystem& s, int y_coord) {
  const std::string& Y = s.chart[y_coord];
  const std::string& W = s.chart[1 - y_coord];
  const Expr& num = y_coord == 0 ? s.num1 : s.num2;
  const Expr& den = y_coord == 0 ? s.den1 : s.den2;
  if (symbols(den).count(W)) throw Error(s.name + ": denominator depends on the eliminated coordinate");
  if (symbols(differentiate(differentiate(num, W), W)).count(W)) {
    throw Error(s.name + ": numerator is not affine in the eliminated coordinate");
  }
  const Expr a = substitute(num, W, Expr(0));
  const Expr b = substitute(num, W, Expr(1)) - a;
  const Expr elim = (sym("yp") * den - a) / b;
  return substitute(elim, Y, sym("y"));
}

struct OdeRegistry {
  std::vector<std::string> ids;
  std::map<std::string, ScalarODE2> odes;
};

const OdeRegistry& ode_registry() {
  static const OdeRegistry reg = [] {
    OdeRegistry r;
    for (const auto& sp : ode_specs()) {
      const PlanarSystem& s = get_system(sp.parent);
      ScalarODE2 o{sp.id, sp.parent, sp.y_coord, parse_expr(sp.rhs),
                   derive_elimination(s, sp.y_coord), std::nullopt};
      if (sp.displayed_elimination) o.displayed_elimination = parse_expr(sp.displayed_elimination);
      r.ids.push_back(sp.id);
      r.odes.emplace(sp.id, std::move(o));
    }
    return r;
  }();
  return reg;
}

}  // namespace

const std::vector<std::string>& all_ode2() { return ode_registry().ids; }

const ScalarODE2& get_ode2(const std::string& id) {
  const auto& r = ode_registry();
  auto it = r.odes.find(id);
  if (it == r.odes.end()) throw UnknownId("reduction '" + id + "'");
  return it->second;
}

Expr flow_second_derivative(const ScalarODE2& o) {
  const PlanarSystem& s = get_system(o.parent);
  const std::string& Y = s.chart[o.y_coord];
  const std::string& W = s.chart[1 - o.y_coord];
  const Expr fy = o.y_coord == 0 ? s.rhs1() : s.rhs2();
  const Expr fw = o.y_coord == 0 ? s.rhs2() : s.rhs1();
  const Expr ypp =
      differentiate(fy, Y) * sym("yp") + differentiate(fy, W) * fw + differentiate(fy, "t");
  return substitute(ypp, Substitution{{Y, sym("y")}, {W, o.elimination}});
}

IdentityReport verify_reduction(const std::string& ode_id, int samples, std::uint64_t seed) {
  const ScalarODE2& o = get_ode2(ode_id);
  const bool alpha_zero = get_system(o.parent).alpha_zero;
  const Expr oracle = flow_second_derivative(o);
  IdentityReport rep{ode_id, {}};
  rep.stats = check_identity({"y", "yp", "t", "n", "N", "alpha"}, samples, seed,
                             [&](Binding<Rational> b) {
                               if (alpha_zero) b["alpha"] = Rational(0);
                               return evaluate(o.rhs, b) - evaluate(oracle, b);
                             });
  return rep;
}

std::string catalogue_json() {
  using nlohmann::ordered_json;
  ordered_json systems = ordered_json::array();
  for (SystemId id : all_systems()) {
    const PlanarSystem& s = get_system(id);
    ordered_json j;
    j["id"] = s.name;
    j["chart"] = {s.chart[0], s.chart[1]};
    j["rhs1_num"] = to_prefix(s.num1);
    j["rhs1_den"] = to_prefix(s.den1);
    j["rhs2_num"] = to_prefix(s.num2);
    j["rhs2_den"] = to_prefix(s.den2);
    if (s.divisor) {
      j["divisor"] = s.chart[s.divisor->coord] + " = " + to_infix(s.divisor->value);
      ordered_json ex = ordered_json::array();
      for (const auto& e : s.divisor->exceptional) ex.push_back(to_infix(e));
      j["exceptional"] = ex;
    }
    if (s.alpha_zero) j["alpha"] = "0";
    systems.push_back(j);
  }
  ordered_json odes = ordered_json::array();
  for (const auto& id : all_ode2()) {
    const ScalarODE2& o = get_ode2(id);
    const PlanarSystem& s = get_system(o.parent);
    ordered_json j;
    j["id"] = o.id;
    j["parent"] = s.name;
    j["y"] = s.chart[o.y_coord];
    j["rhs"] = to_prefix(o.rhs);
    j["elimination"] = to_prefix(o.elimination);
    odes.push_back(j);
  }
  ordered_json root;
  root["systems"] = systems;
  root["reductions"] = odes;
  return root.dump(2);
}

}  // namespace kpv
