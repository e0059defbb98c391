#include "kpv/transforms.hpp"

#include <map>

#include "kpv/errors.hpp"
#include "kpv/parse.hpp"

namespace kpv {

namespace {

struct MapSpec {
  const char* id;
  Chart source;
  Chart target;
  const char* f1;
  const char* f2;
  const char* inverse;
};

std::vector<MapSpec> map_specs() {
  return {
      // chart swaps
      {"phi_qP", {"q", "p"}, {"q", "P"}, "q", "1/P", "phi_qPinv"},
      {"phi_qPinv", {"q", "P"}, {"q", "p"}, "q", "1/p", "phi_qP"},
      {"phi_QP", {"q", "p"}, {"Q", "P"}, "1/Q", "1/P", "phi_QPinv"},
      {"phi_QPinv", {"Q", "P"}, {"q", "p"}, "1/q", "1/p", "phi_QP"},
      // first blow-ups of the original system
      {"phi11", {"q", "p"}, {"u11", "v11"}, "u11 v11", "v11", nullptr},
      {"phihat11", {"q", "p"}, {"U11", "V11"}, "V11", "U11 V11", nullptr},
      {"phi21", {"q", "p"}, {"u21", "v21"}, "(1+N)/N + u21 v21", "-(1+N)/N + v21", nullptr},
      {"phihat21", {"q", "p"}, {"U21", "V21"}, "(1+N)/N + V21", "-(1+N)/N + U21 V21", nullptr},
      {"phitilde22", {"u21", "v21"}, {"Ut22", "Vt22"}, "-1 + Vt22", "Ut22 Vt22", nullptr},
      {"phi31", {"q", "p"}, {"u31", "v31"}, "(1+N-alpha)/N + u31 v31", "-(1+N-alpha)/N + v31", nullptr},
      {"phihat31", {"q", "p"}, {"U31", "V31"}, "(1+N-alpha)/N + V31", "-(1+N-alpha)/N + U31 V31",
       nullptr},
      {"phihat41", {"q", "P"}, {"U41", "V41"}, "n/N + V41", "U41 V41", nullptr},
      // first cascade at the point (Q, P) = (0, 0)
      {"phi51", {"Q", "P"}, {"u51", "v51"}, "u51 v51", "v51", nullptr},
      {"phihat52", {"u51", "v51"}, {"U52", "V52"}, "V52", "U52 V52", nullptr},
      {"tauhat52", {"U52", "V52"}, {"u52", "v52"}, "1/u52", "v52", nullptr},
      {"phi53", {"u52", "v52"}, {"u53", "v53"}, "-t/N + u53 v53", "v53", nullptr},
      {"phi54", {"u53", "v53"}, {"u54", "v54"}, "(-1 - 2 N + n - t + alpha)/N + u54 v54", "v54",
       nullptr},
      {"Phi54", {"Q", "P"}, {"u54", "v54"},
       "N v54^2/(v54 (N u54 v54 + alpha + n - 2 N - t - 1) - t)",
       "N v54/(v54 (N u54 v54 + alpha + n - 2 N - t - 1) - t)", "Phi54inv"},
      {"Phi54inv", {"u54", "v54"}, {"Q", "P"}, "(Q (P (-alpha - n + 2 N + t + 1) + N) + t P^2)/(N Q^2)",
       "Q/P", "Phi54"},
      // second cascade at the same point
      {"phi51b", {"Q", "P"}, {"u51b", "v51b"}, "u51b v51b", "v51b", nullptr},
      {"phi52b", {"u51b", "v51b"}, {"u52b", "v52b"}, "u52b v52b", "v52b", nullptr},
      {"tau52b", {"u52b", "v52b"}, {"u52b_tw", "v52b_tw"}, "1/u52b_tw", "v52b_tw", nullptr},
      {"phi53b", {"u52b_tw", "v52b_tw"}, {"u53b", "v53b"}, "-N/t + u53b v53b", "v53b", nullptr},
      {"phi54b", {"u53b", "v53b"}, {"u54b", "v54b"}, "(-1 - 2 N + n - t + alpha)/t + u54b v54b", "v54b",
       nullptr},
      {"Phi54b", {"Q", "P"}, {"u54b", "v54b"},
       "t v54b^2/(v54b (alpha + n - 2 N + t u54b v54b - t - 1) - N)", "v54b", "Phi54binv"},
      {"Phi54binv", {"u54b", "v54b"}, {"Q", "P"}, "((-alpha - n + 2 N + t + 1) P + N)/(t P^2) + 1/Q",
       "P", "Phi54b"},
      // iteration from the (U41, V41) chart
      {"phi42", {"U41", "V41"}, {"u42", "v42"}, "1/(u42 v42)", "v42", nullptr},
      {"phi43a", {"u42", "v42"}, {"u43a", "v43a"}, "u43a v43a", "-n/N + v43a", nullptr},
      {"phi43b", {"u42", "v42"}, {"u43b", "v43b"}, "-(1+N)/N + u43b v43b", "(1+N-n)/N + v43b", nullptr},
      {"phi43c", {"u42", "v42"}, {"u43c", "v43c"}, "(-1-N+alpha)/N + u43c v43c",
       "(1+N-n-alpha)/N + v43c", nullptr},
      {"varphihat11", {"u42", "v42"}, {"U11", "V11"}, "U11 V11", "-n/N + V11", nullptr},
      {"varphihat21", {"u42", "v42"}, {"U21", "V21"}, "-(1+N)/N + U21 V21", "(1+N-n)/N + V21", nullptr},
      {"varphihat31", {"u42", "v42"}, {"U31", "V31"}, "(-1-N+alpha)/N + U31 V31",
       "(1+N-n-alpha)/N + V31", nullptr},
      // iteration from the (u54b, v54b) chart
      {"phi55b", {"u54b", "v54b"}, {"u55b", "v55b"}, "u55b v55b", "1/v55b", nullptr},
      {"phi56b", {"u55b", "v55b"}, {"u56b", "v56b"}, "u56b v56b", "1/v56b", nullptr},
      {"phi57b", {"u56b", "v56b"}, {"u57b", "v57b"}, "1/(u57b v57b)", "v57b", nullptr},
      {"phi58b", {"u57b", "v57b"}, {"u58b", "v58b"}, "u58b v58b", "v58b", nullptr},
      {"tau58b", {"u58b", "v58b"}, {"u58b_tw", "v58b_tw"}, "1/u58b_tw", "v58b_tw", nullptr},
      {"phi59b", {"u58b_tw", "v58b_tw"}, {"u59b", "v59b"}, "N/t + u59b v59b", "v59b", nullptr},
      {"phi510b", {"u59b", "v59b"}, {"u510b", "v510b"}, "(1 + 2 N - n + t - alpha)/t + u510b v510b",
       "v510b", nullptr},
      {"Phi510b", {"u56b", "v56b"}, {"u510b", "v510b"},
       "(v510b (-alpha - n + 2 N + t u510b v510b + t + 1) + N)/(t v510b^2)", "v510b", "Phi510binv"},
      {"Phi510binv", {"u510b", "v510b"}, {"u56b", "v56b"},
       "u56b + (-N + (-1 - 2 N + n - t + alpha) v56b)/(t v56b^2)", "v56b", "Phi510b"},
      {"psihat11", {"u510b", "v510b"}, {"U11", "V11"}, "V11", "1/(U11 V11)", nullptr},
      // blow-ups giving polynomial systems
      {"phihat12", {"U11", "V11"}, {"U12", "V12"}, "-1 + V12", "(1+N)/N + U12 V12", nullptr},
      {"phihat22", {"U21", "V21"}, {"U22", "V22"}, "-1 + V22", "-(1+N)/N + U22 V22", nullptr},
      {"phihat32", {"U31", "V31"}, {"U32", "V32"}, "-1 + V32", "alpha/N + U32 V32", nullptr},
      {"phi55", {"u54", "v54"}, {"u55", "v55"}, "-1 + n/N + u55 v55", "-1 + v55", nullptr},
      {"phi12b", {"u11", "v11"}, {"u12b", "v12b"}, "-1 + u12b", "-(1+N)/N + u12b v12b", nullptr},
  };
}

struct MapRegistry {
  std::vector<std::string> ids;
  std::map<std::string, BirationalMap> maps;
};

const MapRegistry& map_registry() {
  static const MapRegistry reg = [] {
    MapRegistry r;
    for (const auto& sp : map_specs()) {
      BirationalMap m{sp.id, sp.source, sp.target, {parse_expr(sp.f1), parse_expr(sp.f2)}, std::nullopt};
      if (sp.inverse) m.inverse = sp.inverse;
      r.ids.push_back(sp.id);
      r.maps.emplace(sp.id, std::move(m));
    }
    return r;
  }();
  return reg;
}

// Identity checks in this module sample coordinates and parameters together.
std::vector<std::string> with_params(const Chart& c) {
  std::vector<std::string> names{c[0], c[1]};
  for (const auto& p : parameter_names()) names.push_back(p);
  return names;
}

}  // namespace

const std::vector<std::string>& all_maps() { return map_registry().ids; }

const BirationalMap& get_map(const std::string& id) {
  const auto& r = map_registry();
  auto it = r.maps.find(id);
  if (it == r.maps.end()) throw UnknownId("map '" + id + "'");
  return it->second;
}

std::array<Rational, 2> apply_map(const BirationalMap& m, const std::array<Rational, 2>& pt,
                                  const Binding<Rational>& params) {
  Binding<Rational> b = params;
  b[m.target[0]] = pt[0];
  b[m.target[1]] = pt[1];
  try {
    const auto v = evaluate_all({m.forward[0], m.forward[1]}, b);
    return {v[0], v[1]};
  } catch (const DivisionByZero& e) {
    throw SingularLocus(m.id + ": " + e.what());
  }
}

BirationalMap compose_maps(const std::vector<BirationalMap>& chain, bool strict) {
  if (chain.empty()) throw Error("empty cascade");
  BirationalMap out;
  out.source = chain.front().source;
  out.forward = {sym(out.source[0]), sym(out.source[1])};
  Chart current = out.source;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const BirationalMap& m = chain[i];
    if (strict && m.source != current) {
      throw Error("incompatible charts between '" + (i ? chain[i - 1].id : out.source[0]) +
                  "' and '" + m.id + "'");
    }
    // Positional: the k-th current coordinate becomes forward[k].
    const Substitution s{{current[0], m.forward[0]}, {current[1], m.forward[1]}};
    out.forward = {substitute(out.forward[0], s), substitute(out.forward[1], s)};
    current = m.target;
    out.id += (out.id.empty() ? "" : "*") + m.id;
  }
  out.target = current;
  return out;
}

BirationalMap compose_maps(const std::vector<std::string>& chain, bool strict) {
  std::vector<BirationalMap> maps;
  for (const auto& id : chain) maps.push_back(get_map(id));
  return compose_maps(maps, strict);
}

BirationalMap with_convention(const BirationalMap& m, BlowupConvention c) {
  if (c == BlowupConvention::kCenterPlusProduct) return m;
  BirationalMap out = m;
  std::swap(out.target[0], out.target[1]);
  out.id += "@alt";
  return out;
}

namespace {

std::vector<IndeterminacyPoint> make_points() {
  using S = SystemId;
  auto pt = [](const char* id, S s, const char* a, const char* b, bool a0) {
    return IndeterminacyPoint{id, s, {parse_expr(a), parse_expr(b)}, a0};
  };
  return {
      pt("P1", S::kOriginal, "0", "0", false),
      pt("P2", S::kOriginal, "(1+N)/N", "-(1+N)/N", false),
      pt("P3", S::kOriginal, "(1+N-alpha)/N", "-(1+N-alpha)/N", false),
      pt("P4", S::kOriginalqP, "n/N", "0", false),
      pt("P5", S::kOriginalQP, "0", "0", false),
      pt("Ptilde22", S::kUv21, "-1", "0", true),
  };
}

}  // namespace

const std::vector<IndeterminacyPoint>& indeterminacy_points() {
  static const std::vector<IndeterminacyPoint> pts = make_points();
  return pts;
}

const IndeterminacyPoint& get_indeterminacy_point(const std::string& id) {
  for (const auto& p : indeterminacy_points()) {
    if (p.id == id) return p;
  }
  throw UnknownId("point '" + id + "'");
}

CheckReport verify_indeterminacy(const IndeterminacyPoint& p, int samples, std::uint64_t seed) {
  const PlanarSystem& s = get_system(p.system);
  CheckReport rep{p.id, {}};
  rep.stats = check_identity(parameter_names(), samples, seed, [&](Binding<Rational> b) {
    if (p.alpha_zero) b["alpha"] = Rational(0);
    const auto c = evaluate_all({p.coords[0], p.coords[1]}, b);
    b[s.chart[0]] = c[0];
    b[s.chart[1]] = c[1];
    const auto v = evaluate_all({s.num1, s.den1, s.num2, s.den2}, b);
    const bool first = v[0].is_zero() && v[1].is_zero();
    const bool second = v[2].is_zero() && v[3].is_zero();
    return Rational(first || second ? 0 : 1);
  });
  return rep;
}

CheckReport verify_coincidence_alpha0(const IndeterminacyPoint& a, const IndeterminacyPoint& b,
                                      int samples, std::uint64_t seed) {
  CheckReport rep{a.id + "=" + b.id + "@alpha0", {}};
  if (a.system != b.system) {
    rep.stats.failures = 1;
    rep.stats.first_failure = "points live in different charts";
    return rep;
  }
  rep.stats = check_identity(parameter_names(), samples, seed, [&](Binding<Rational> p) {
    p["alpha"] = Rational(0);
    const auto x = evaluate_all({a.coords[0], a.coords[1]}, p);
    const auto y = evaluate_all({b.coords[0], b.coords[1]}, p);
    return abs(x[0] - y[0]) + abs(x[1] - y[1]);
  });
  return rep;
}

CheckReport pushforward_check(const PlanarSystem& source, const BirationalMap& m,
                              const PlanarSystem& target, int samples, std::uint64_t seed) {
  CheckReport rep{source.name + "->" + m.id + "->" + target.name, {}};
  if (m.source != source.chart || m.target != target.chart) {
    rep.stats.failures = 1;
    rep.stats.first_failure = "chart mismatch";
    return rep;
  }
  const bool alpha_zero = source.alpha_zero || target.alpha_zero;
  const std::string& u = target.chart[0];
  const std::string& v = target.chart[1];
  // F, dF/du, dF/dv, dF/dt for both components.
  std::vector<Expr> jac;
  for (const auto& f : m.forward) {
    jac.push_back(f);
    jac.push_back(differentiate(f, u));
    jac.push_back(differentiate(f, v));
    jac.push_back(differentiate(f, "t"));
  }
  rep.stats = check_identity(with_params(target.chart), samples, seed, [&](Binding<Rational> b) {
    if (alpha_zero) b["alpha"] = Rational(0);
    const auto j = evaluate_all(jac, b);
    Binding<Rational> sb = b;
    sb[source.chart[0]] = j[0];
    sb[source.chart[1]] = j[4];
    const auto [s1, s2] = evaluate_rhs(source, sb);
    const Rational r1 = s1 - j[3];
    const Rational r2 = s2 - j[7];
    const Rational det = j[1] * j[6] - j[2] * j[5];
    if (det.is_zero()) throw DivisionByZero("Jacobian");
    const Rational du = (r1 * j[6] - j[2] * r2) / det;
    const Rational dv = (j[1] * r2 - j[5] * r1) / det;
    const auto [t1, t2] = evaluate_rhs(target, b);
    return abs(du - t1) + abs(dv - t2);
  });
  return rep;
}

const std::vector<PushforwardTriple>& pushforward_triples() {
  static const std::vector<PushforwardTriple> triples{
      {"original", "phi_qP", "original_qP"},
      {"original", "phi_QP", "original_QP"},
      {"original", "phi11", "uv11"},
      {"original", "phihat11", "UV11"},
      {"original", "phi21", "uv21"},
      {"original", "phihat21", "UV21"},
      {"uv21", "phitilde22", "tildeUV22"},
      {"original", "phi31", "uv31"},
      {"original", "phihat31", "UV31"},
      {"original_qP", "phihat41", "UV41"},
      {"original_QP", "Phi54", "uv54"},
      {"original_QP", "Phi54b", "uv54b"},
      {"UV41", "phi42", "uv42"},
      {"uv42", "phi43a", "uv43a"},
      {"uv42", "phi43b", "uv43b"},
      {"uv42", "phi43c", "uv43c"},
      {"uv42", "varphihat11", "UV11"},
      {"uv42", "varphihat21", "UV21"},
      {"uv42", "varphihat31", "UV31"},
      {"uv54b", "phi55b", "uv55b"},
      {"uv55b", "phi56b", "uv56b"},
      {"uv56b", "Phi510b", "uv510b"},
      {"uv510b", "psihat11", "UV11"},
      {"UV11", "phihat12", "UV12"},
      {"UV21", "phihat22", "UV22"},
      {"UV31", "phihat32", "UV32"},
      {"uv54", "phi55", "uv55"},
      {"uv11", "phi12b", "uv12b"},
  };
  return triples;
}

CheckReport verify_map_equal(const std::string& id, const BirationalMap& a, const BirationalMap& b,
                             int samples, std::uint64_t seed) {
  CheckReport rep{id, {}};
  if (a.source != b.source || a.target != b.target) {
    rep.stats.failures = 1;
    rep.stats.first_failure = "chart mismatch";
    return rep;
  }
  const std::vector<Expr> es{a.forward[0], a.forward[1], b.forward[0], b.forward[1]};
  rep.stats = check_identity(with_params(a.target), samples, seed, [&](const Binding<Rational>& p) {
    const auto v = evaluate_all(es, p);
    return abs(v[0] - v[2]) + abs(v[1] - v[3]);
  });
  return rep;
}

CheckReport verify_inverse(const BirationalMap& m, int samples, std::uint64_t seed) {
  CheckReport rep{m.id + "<->inverse", {}};
  if (!m.inverse) {
    rep.stats.failures = 1;
    rep.stats.first_failure = "no displayed inverse";
    return rep;
  }
  const BirationalMap& inv = get_map(*m.inverse);
  const BirationalMap there = compose_maps(std::vector<BirationalMap>{m, inv});
  const BirationalMap back = compose_maps(std::vector<BirationalMap>{inv, m});
  BirationalMap id1{"id", m.source, m.source, {sym(m.source[0]), sym(m.source[1])}, std::nullopt};
  BirationalMap id2{"id", m.target, m.target, {sym(m.target[0]), sym(m.target[1])}, std::nullopt};
  const CheckReport a = verify_map_equal("fwd", there, id1, samples, seed);
  const CheckReport b = verify_map_equal("inv", back, id2, samples, derive_seed(seed, "inverse"));
  rep.stats = a.stats;
  rep.stats.samples += b.stats.samples;
  rep.stats.resamples += b.stats.resamples;
  rep.stats.failures += b.stats.failures;
  if (b.stats.max_residual > rep.stats.max_residual) rep.stats.max_residual = b.stats.max_residual;
  if (rep.stats.first_failure.empty()) rep.stats.first_failure = b.stats.first_failure;
  return rep;
}

const std::vector<Decomposition>& decompositions() {
  static const std::vector<Decomposition> ds{
      {"phihat11_via42", "phihat11", {"phi_qP", "phihat41", "phi42", "varphihat11"}, std::nullopt,
       {{"uv42", "varphihat11", "UV11"}}},
      {"phihat21_via42", "phihat21", {"phi_qP", "phihat41", "phi42", "varphihat21"}, std::nullopt,
       {{"uv42", "varphihat21", "UV21"}}},
      {"phihat31_via42", "phihat31", {"phi_qP", "phihat41", "phi42", "varphihat31"}, std::nullopt,
       {{"uv42", "varphihat31", "UV31"}}},
      {"phihat11_via43a", "phihat11", {"phi_qP", "phihat41", "phi42", "phi43a"}, Chart{"U11", "V11"},
       {{"uv42", "phi43a", "uv43a"}}},
      {"phihat21_via43b", "phihat21", {"phi_qP", "phihat41", "phi42", "phi43b"}, Chart{"U21", "V21"},
       {{"uv42", "phi43b", "uv43b"}}},
      {"phihat31_via43c", "phihat31", {"phi_qP", "phihat41", "phi42", "phi43c"}, Chart{"U31", "V31"},
       {{"uv42", "phi43c", "uv43c"}}},
      {"phihat11_via510b", "phihat11", {"phi_QP", "Phi54b", "phi55b", "phi56b", "Phi510b", "psihat11"},
       std::nullopt, {{"uv510b", "psihat11", "UV11"}}},
      {"cascade_Phi54", "Phi54", {"phi51", "phihat52", "tauhat52", "phi53", "phi54"}, std::nullopt, {}},
      {"cascade_Phi54b", "Phi54b", {"phi51b", "phi52b", "tau52b", "phi53b", "phi54b"}, std::nullopt, {}},
      {"cascade_Phi510b", "Phi510b", {"phi57b", "phi58b", "tau58b", "phi59b", "phi510b"}, std::nullopt,
       {}},
  };
  return ds;
}

const Decomposition& get_decomposition(const std::string& id) {
  for (const auto& d : decompositions()) {
    if (d.id == id) return d;
  }
  throw UnknownId("decomposition '" + id + "'");
}

CheckReport verify_decomposition(const Decomposition& d, int samples, std::uint64_t seed) {
  BirationalMap comp = compose_maps(d.chain, false);
  if (d.relabel) {
    const Substitution s{{comp.target[0], sym((*d.relabel)[0])}, {comp.target[1], sym((*d.relabel)[1])}};
    comp.forward = {substitute(comp.forward[0], s), substitute(comp.forward[1], s)};
    comp.target = *d.relabel;
  }
  CheckReport rep = verify_map_equal(d.id, get_map(d.lhs), comp, samples, seed);
  for (const auto& br : d.bridges) {
    const CheckReport b = pushforward_check(get_system(br.source), get_map(br.map),
                                            get_system(br.target), samples,
                                            derive_seed(seed, br.map));
    rep.stats.failures += b.stats.failures;
    rep.stats.resamples += b.stats.resamples;
    if (rep.stats.first_failure.empty() && !b.stats.first_failure.empty()) {
      rep.stats.first_failure = "bridge " + b.id + ": " + b.stats.first_failure;
    }
  }
  return rep;
}

}  // namespace kpv
