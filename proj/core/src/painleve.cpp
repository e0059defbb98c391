#include "kpv/painleve.hpp"

#include <algorithm>
#include <cmath>

#include "kpv/catalogue.hpp"
#include "kpv/errors.hpp"
#include "kpv/parse.hpp"

namespace kpv {

namespace {

struct SetEntry {
  PVSet set;
  const char* name;
  const char* a5;
  const char* b5;
  const char* g5;
};

const std::vector<SetEntry>& set_table() {
  static const std::vector<SetEntry> kSets{
      {PVSet::kUV11, "UV11", "n^2/2", "-alpha^2/2", "alpha + n - 2 N - 1"},
      {PVSet::kUV21, "UV21", "(N - n + 1)^2/2", "-(-alpha + N + 1)^2/2", "alpha + n + 1"},
      {PVSet::kUV31, "UV31", "(N - n + 1 - alpha)^2/2", "-(1 + N)^2/2", "-alpha + n + 1"},
      {PVSet::kAlt, "UV11_alt", "alpha^2/2", "-n^2/2", "1 + 2 N - n - alpha"},
      {PVSet::kTilde, "tildeUV22", "(N - n + 1)^2/2", "-(N + 1)^2/2", "n + 1"},
      {PVSet::kWalter, "walter", "(alpha - N - 1)^2/2", "-(n - N)^2/2", "-(n + alpha)"},
  };
  return kSets;
}

Jet constant_jet(const Scalar& v, Mode m) { return Jet{v, Scalar::zero(m), Scalar::zero(m)}; }

Binding<Scalar> lift_binding(const Binding<Rational>& b) {
  Binding<Scalar> out;
  for (const auto& [k, v] : b) out[k] = Scalar(v);
  return out;
}

Binding<Scalar> lift_binding(const Binding<double>& b) {
  Binding<Scalar> out;
  for (const auto& [k, v] : b) out[k] = Scalar(v);
  return out;
}

// PV right-hand side with parameters left as symbols.
const Expr& generic_pv_rhs() {
  static const Expr kRhs = pv_rhs_expr(
      {sym("alpha5"), sym("beta5"), sym("gamma5"), sym("delta5")});
  return kRhs;
}

Binding<Jet> pv_jet_binding(const PVJet& j, const PVValues& p, Mode m) {
  return {{"t", Jet{j.t, Scalar::one(m), Scalar::zero(m)}},
          {"y", Jet{j.y, j.yp, j.ypp}},
          {"yp", Jet{j.yp, j.ypp, Scalar::zero(m)}},
          {"alpha5", constant_jet(p.a5, m)},
          {"beta5", constant_jet(p.b5, m)},
          {"gamma5", constant_jet(p.g5, m)},
          {"delta5", constant_jet(p.d5, m)}};
}

}  // namespace

const std::vector<PVSet>& all_pv_sets() {
  static const std::vector<PVSet> kAll{PVSet::kUV11, PVSet::kUV21, PVSet::kUV31,
                                       PVSet::kAlt,  PVSet::kTilde, PVSet::kWalter};
  return kAll;
}

std::string pv_set_name(PVSet s) {
  for (const auto& e : set_table()) {
    if (e.set == s) return e.name;
  }
  throw UnknownId("PV set");
}

PVSet pv_set_from_name(const std::string& name) {
  for (const auto& e : set_table()) {
    if (name == e.name) return e.set;
  }
  if (name == "uv54" || name == "UV12" || name == "uv55") return PVSet::kUV11;
  if (name == "UV22") return PVSet::kUV21;
  if (name == "UV32") return PVSet::kUV31;
  throw UnknownId("PV parameter set '" + name + "'");
}

PVParams pv_params_for(PVSet s) {
  for (const auto& e : set_table()) {
    if (e.set == s) {
      return {parse_expr(e.a5), parse_expr(e.b5), parse_expr(e.g5), Expr(Rational(-1, 2))};
    }
  }
  throw UnknownId("PV set");
}

PVParams pv_params_for(const std::string& chart) { return pv_params_for(pv_set_from_name(chart)); }

PVRoots pv_roots_for(PVSet s) {
  switch (s) {
    case PVSet::kUV11:
      return {parse_expr("n"), parse_expr("alpha"), Expr(1)};
    case PVSet::kUV21:
      return {parse_expr("N - n + 1"), parse_expr("-alpha + N + 1"), Expr(1)};
    case PVSet::kUV31:
      return {parse_expr("N - n + 1 - alpha"), parse_expr("1 + N"), Expr(1)};
    default:
      throw UnknownId("no carried roots for PV set " + pv_set_name(s));
  }
}

PVValues evaluate_params(const PVParams& p, const Binding<Scalar>& b, Mode mode) {
  return {evaluate(p.a5, b, mode), evaluate(p.b5, b, mode), evaluate(p.g5, b, mode), evaluate(p.d5, b, mode)};
}

RootValues evaluate_roots(const PVRoots& r, const Binding<Scalar>& b, Mode mode) {
  return {evaluate(r.c, b, mode), evaluate(r.a, b, mode), evaluate(r.k, b, mode)};
}

Expr pv_rhs_expr(const PVParams& p) {
  const Expr y = sym("y"), yp = sym("yp"), t = sym("t");
  return (Expr(1) / (Expr(2) * y) + Expr(1) / (y - Expr(1))) * pow(yp, 2) - yp / t +
         pow(y - Expr(1), 2) / pow(t, 2) * (p.a5 * y + p.b5 / y) + p.g5 * y / t +
         p.d5 * y * (y + Expr(1)) / (y - Expr(1));
}

Scalar pv_rhs(const Scalar& t, const Scalar& y, const Scalar& yp, const PVValues& p) {
  const Mode m = y.mode();
  const Scalar one = Scalar::one(m);
  if (t.is_zero()) throw SingularLocus("PV at t = 0");
  if (y.is_zero() || (y - one).is_zero()) throw SingularLocus("PV at y = " + y.str());
  const Scalar two = Scalar::from_int(2, m);
  const Scalar ym1 = y - one;
  return (one / (two * y) + one / ym1) * yp * yp - yp / t + ym1 * ym1 / (t * t) * (p.a5 * y + p.b5 / y) +
         p.g5 * y / t + p.d5 * y * (y + one) / ym1;
}

Scalar pv_residual(const PVJet& j, const PVValues& p) { return j.ypp - pv_rhs(j.t, j.y, j.yp, p); }

void BacklundSigns::validate() const {
  for (int e : {e1, e2, e3}) {
    if (e != 1 && e != -1) throw Error("Backlund signs must be +1 or -1");
  }
}

std::string BacklundSigns::str() const {
  auto f = [](int e) { return e > 0 ? std::string("+1") : std::string("-1"); };
  return "T(" + f(e1) + "," + f(e2) + "," + f(e3) + ")";
}

namespace {

Scalar positive_sqrt(const Scalar& r, const char* what) {
  if (r.is_exact()) {
    if (r.rational().sign() < 0) {
      throw Error(std::string("negative radicand for ") + what + " in exact mode; use float mode");
    }
    Rational root;
    if (!exact_sqrt(r.rational(), root)) {
      throw Error(std::string("radicand for ") + what + " is not a rational square; use float mode");
    }
    return Scalar(root);
  }
  const double d = r.to_double();
  if (d < 0.0) throw Error(std::string("negative radicand for ") + what + "; complex roots are not supported");
  return Scalar(std::sqrt(d));
}

}  // namespace

RootValues positive_roots(const PVValues& p) {
  const Mode m = p.a5.mode();
  const Scalar two = Scalar::from_int(2, m);
  return {positive_sqrt(two * p.a5, "c"), positive_sqrt(-two * p.b5, "a"), positive_sqrt(-two * p.d5, "k")};
}

PVValues backlund_params(const PVValues& p, const RootValues& r, const BacklundSigns& s) {
  s.validate();
  if (p.d5.is_zero()) throw Error("Backlund transformation needs delta5 != 0");
  const Mode m = p.a5.mode();
  const Scalar e1 = Scalar::from_int(s.e1, m), e2 = Scalar::from_int(s.e2, m), e3 = Scalar::from_int(s.e3, m);
  const Scalar w = e3 * r.k * (Scalar::one(m) - e2 * r.a - e1 * r.c);
  const Scalar x = p.g5 + w, y = p.g5 - w;
  const Scalar sixteen_d = Scalar::from_int(16, m) * p.d5;
  return {-(x * x) / sixteen_d, y * y / sixteen_d, e3 * r.k * (e2 * r.a - e1 * r.c), p.d5};
}

PVValues backlund_params(const PVValues& p, const BacklundSigns& s) {
  return backlund_params(p, positive_roots(p), s);
}

std::pair<PVParams, PVRoots> backlund_step(const PVParams& p, const PVRoots& r, const BacklundSigns& s) {
  s.validate();
  const Expr e1(s.e1), e2(s.e2), e3(s.e3);
  const Expr w = e3 * r.k * (Expr(1) - e2 * r.a - e1 * r.c);
  const Expr x = p.g5 + w, y = p.g5 - w;
  PVParams out{-pow(x, 2) / (Expr(16) * p.d5), pow(y, 2) / (Expr(16) * p.d5), e3 * r.k * (e2 * r.a - e1 * r.c),
               p.d5};
  PVRoots roots{x / (Expr(2) * r.k), y / (Expr(2) * r.k), r.k};
  return {out, roots};
}

Expr backlund_map_expr(const BacklundSigns& s) {
  s.validate();
  const Expr y = sym("y"), yp = sym("yp"), t = sym("t");
  const Expr c = sym("c"), a = sym("a"), k = sym("k");
  const Expr e1(s.e1), e2(s.e2), e3(s.e3);
  const Expr den = t * yp - e1 * c * pow(y, 2) + (e1 * c - e2 * a + e3 * k * t) * y + e2 * a;
  return Expr(1) - Expr(2) * e3 * k * t * y / den;
}

BacklundResult backlund_apply(const PVJet& j, const PVValues& p, const RootValues& r, const BacklundSigns& s) {
  const Mode m = j.y.mode();
  Binding<Jet> b = pv_jet_binding(j, p, m);
  // d/dt of the source rhs along the curve is y'''.
  const Jet rhs = evaluate_jet(generic_pv_rhs(), b, m);
  b["yp"] = Jet{j.yp, j.ypp, rhs.d1};
  b["c"] = constant_jet(r.c, m);
  b["a"] = constant_jet(r.a, m);
  b["k"] = constant_jet(r.k, m);
  const Jet y1 = evaluate_jet(backlund_map_expr(s), b, m);

  BacklundResult out;
  out.jet = {j.t, y1.v, y1.d1, y1.d2};
  out.params = backlund_params(p, r, s);
  const Scalar two_k = Scalar::from_int(2, m) * r.k;
  const Scalar e3k = Scalar::from_int(s.e3, m) * r.k;
  const Scalar w = e3k * (Scalar::one(m) - Scalar::from_int(s.e2, m) * r.a - Scalar::from_int(s.e1, m) * r.c);
  out.roots = {(p.g5 + w) / two_k, (p.g5 - w) / two_k, r.k};
  return out;
}

BacklundResult backlund_apply(const PVJet& j, const PVValues& p, const BacklundSigns& s) {
  return backlund_apply(j, p, positive_roots(p), s);
}

// ---------------------------------------------------------------------------
// Mobius shifts

const std::vector<MobiusReduction>& mobius_reductions() {
  static const std::vector<MobiusReduction> kList = [] {
    const Expr shift = parse_expr("y - 1"), unshift = parse_expr("y + 1");
    const Expr id = sym("y");
    std::vector<MobiusReduction> v{
        {"UV11", "UV11", PVSet::kUV11, shift, unshift, false},
        {"UV21", "UV21", PVSet::kUV21, shift, unshift, false},
        {"UV31", "UV31", PVSet::kUV31, shift, unshift, false},
        {"uv54", "uv54", PVSet::kUV11, shift, unshift, false},
        {"UV11_alt", "UV11", PVSet::kAlt, parse_expr("-1 + 1/y"), parse_expr("1/(y + 1)"), false},
        {"tildeUV22", "tildeUV22", PVSet::kTilde, parse_expr("y/(y - 1)"), parse_expr("y/(y - 1)"), true},
        {"UV12", "UV12", PVSet::kUV11, id, id, false},
        {"UV22", "UV22", PVSet::kUV21, id, id, false},
        {"UV32", "UV32", PVSet::kUV31, id, id, false},
        {"uv55", "uv55", PVSet::kUV11, id, id, false},
    };
    return v;
  }();
  return kList;
}

const MobiusReduction& get_mobius(const std::string& id) {
  for (const auto& r : mobius_reductions()) {
    if (r.id == id) return r;
  }
  throw UnknownId("Mobius reduction '" + id + "'");
}

MobiusReport mobius_reduce(const std::string& id, int samples, std::uint64_t seed) {
  const MobiusReduction& mr = get_mobius(id);
  const ScalarODE2& ode = get_ode2(mr.ode);
  const PVParams params = pv_params_for(mr.params);
  const Mode m = Mode::kExact;
  MobiusReport rep{id, {}};
  rep.stats = check_identity({"t", "n", "N", "alpha", "y", "yp"}, samples, seed, [&](const Binding<Rational>& draw) {
    Binding<Rational> b = draw;
    if (mr.alpha_zero) b["alpha"] = Rational(0);
    const Binding<Scalar> sb = lift_binding(b);
    const PVValues pv = evaluate_params(params, sb, m);
    const Scalar t = sb.at("t"), y = sb.at("y"), yp = sb.at("yp");
    const Scalar ypp = pv_rhs(t, y, yp, pv);
    const Jet u = evaluate_jet(mr.forward, Binding<Jet>{{"y", Jet{y, yp, ypp}}}, m);
    Binding<Rational> ob = b;
    ob["y"] = u.v.rational();
    ob["yp"] = u.d1.rational();
    return u.d2.rational() - evaluate(ode.rhs, ob);
  });
  return rep;
}

Binding<double> default_trajectory_params(bool alpha_zero) {
  return {{"n", 1.0}, {"N", 3.0}, {"alpha", alpha_zero ? 0.0 : 1.0 / 3.0}};
}

namespace {

constexpr double kT0 = 1.0;
constexpr double kT1 = 1.5;
constexpr double kY0 = 3.0;

// Integrates with abort-and-shrink on guard trips.
template <class Run>
Trajectory integrate_shrinking(Run run, double t0, double t1, std::string& detail) {
  for (int attempt = 0;; ++attempt) {
    try {
      return run(t1);
    } catch (const GuardTrip& g) {
      if (attempt >= 6) throw;
      t1 = t0 + 0.8 * (g.t() - t0);
      detail += "guard trip at t=" + format_double(g.t()) + ", window shrunk to " + format_double(t1) + "; ";
    } catch (const StepUnderflow& u) {
      if (attempt >= 6) throw;
      t1 = t0 + 0.8 * (u.t() - t0);
      detail += "step underflow at t=" + format_double(u.t()) + ", window shrunk to " + format_double(t1) + "; ";
    }
  }
}

// |y'' - rhs| / max(1, |y''|): stays meaningful when y passes near a pole,
// where absolute rounding grows with |y|^3.
double scaled_residual(const PVJet& j, const PVValues& p) {
  const double r = std::fabs(pv_residual(j, p).to_double()) / std::max(1.0, std::fabs(j.ypp.to_double()));
  return std::isfinite(r) ? r : INFINITY;
}

}  // namespace

TrajectoryResidual mobius_trajectory_check(const std::string& id, const IntegratorConfig& cfg, double tol) {
  const MobiusReduction& mr = get_mobius(id);
  const ScalarODE2& ode = get_ode2(mr.ode);
  const Binding<double> params = default_trajectory_params(mr.alpha_zero);
  const Binding<Scalar> sparams = lift_binding(params);
  const Mode m = Mode::kFloat;
  PVValues pv = evaluate_params(pv_params_for(mr.params), sparams, m);

  TrajectoryResidual res;
  res.id = id;
  res.tolerance = tol;
  // Start from y = 3, y' = 0 on the PV side.
  const double u0 = evaluate(mr.forward, Binding<double>{{"y", kY0}});
  Trajectory tr = integrate_shrinking(
      [&](double t1) { return integrate_ode2(ode, u0, 0.0, kT0, t1, params, cfg); }, kT0, kT1, res.detail);
  res.t0 = tr.t_begin();
  res.t1 = tr.t_end();
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const Jet u{Scalar(tr.x[i][0]), Scalar(tr.x[i][1]), Scalar(tr.dx[i][1])};
    const Jet y = evaluate_jet(mr.inverse, Binding<Jet>{{"y", u}}, m);
    const double r = scaled_residual({Scalar(tr.t[i]), y.v, y.d1, y.d2}, pv);
    res.max_residual = std::max(res.max_residual, r);
    ++res.points;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Compositions

const std::vector<Composition>& compositions() {
  static const std::vector<Composition> kList{
      {"UV11_to_UV21",
       PVSet::kUV11,
       PVSet::kUV21,
       {{1, -1, 1}, {1, 1, 1}, {1, 1, -1}, {-1, -1, -1}},
       parse_expr("y - 2 (N + 1) (y - 1)^2 y/(y (-alpha + n - 2 N + t - 2) + y^2 (-n + 2 N + 2) - t yp + alpha)")},
      {"UV11_to_UV31",
       PVSet::kUV11,
       PVSet::kUV31,
       {{1, 1, 1}, {1, 1, -1}, {1, 1, 1}, {1, 1, -1}},
       parse_expr("y - 2 (y - 1)^2 y (-alpha + N + 1)/(y (3 alpha + n - 2 N + t - 2) + y^2 (-2 alpha - n + 2 N + 2) "
                  "- t yp - alpha)")},
      {"UV21_to_UV31",
       PVSet::kUV21,
       PVSet::kUV31,
       {{1, -1, -1}, {1, 1, 1}},
       parse_expr("y + 2 alpha y (y - 1)^2/(y (3 alpha + n - 2 N + t - 2) + y^2 (-2 alpha - n + N + 1) + N - t yp + 1 "
                  "- alpha)")},
      {"UV11_to_walter",
       PVSet::kUV11,
       PVSet::kWalter,
       {{-1, 1, -1}},
       parse_expr("2 t y/(alpha - y (alpha + n + t) + n y^2 + t yp) + 1")},
  };
  return kList;
}

const Composition& get_composition(const std::string& id) {
  for (const auto& c : compositions()) {
    if (c.id == id) return c;
  }
  throw UnknownId("composition '" + id + "'");
}

BacklundResult apply_composition(const Composition& c, const PVJet& j, const Binding<Scalar>& params, Mode mode) {
  BacklundResult cur{j, evaluate_params(pv_params_for(c.source), params, mode),
                     evaluate_roots(pv_roots_for(c.source), params, mode)};
  for (const auto& s : c.factors) cur = backlund_apply(cur.jet, cur.params, cur.roots, s);
  return cur;
}

CompositionReport verify_composition(const std::string& id, int samples, std::uint64_t seed,
                                     const IntegratorConfig& cfg, double tol) {
  const Composition& c = get_composition(id);
  CompositionReport rep;
  rep.id = id;

  // Parameter chain, symbolically with carried roots.
  PVParams p = pv_params_for(c.source);
  PVRoots r = pv_roots_for(c.source);
  for (const auto& s : c.factors) std::tie(p, r) = backlund_step(p, r, s);
  const PVParams target = pv_params_for(c.target);
  const std::vector<Expr> diffs{p.a5 - target.a5, p.b5 - target.b5, p.g5 - target.g5, p.d5 - target.d5};
  rep.chain = check_identity({"n", "N", "alpha"}, samples, derive_seed(seed, id + "/chain"),
                             [&](const Binding<Rational>& b) {
                               Rational sum;
                               for (const auto& v : evaluate_all(diffs, b)) sum += abs(v);
                               return sum;
                             });

  // Factored map against the closed form on jets of source solutions.
  const PVParams source = pv_params_for(c.source);
  rep.closed_form = check_identity(
      {"t", "n", "N", "alpha", "y", "yp"}, samples, derive_seed(seed, id + "/closed"), [&](const Binding<Rational>& b) {
        const Mode m = Mode::kExact;
        const Binding<Scalar> sb = lift_binding(b);
        const PVValues pv = evaluate_params(source, sb, m);
        const Scalar t = sb.at("t"), y = sb.at("y"), yp = sb.at("yp");
        const PVJet j{t, y, yp, pv_rhs(t, y, yp, pv)};
        const BacklundResult f = apply_composition(c, j, sb, m);

        Binding<Jet> jb = pv_jet_binding(j, pv, m);
        const Jet rhs = evaluate_jet(generic_pv_rhs(), jb, m);
        jb["yp"] = Jet{j.yp, j.ypp, rhs.d1};
        for (const char* name : {"n", "N", "alpha"}) jb[name] = constant_jet(sb.at(name), m);
        const Jet cf = evaluate_jet(c.closed_form, jb, m);
        return (abs(f.jet.y - cf.v) + abs(f.jet.yp - cf.d1) + abs(f.jet.ypp - cf.d2)).rational();
      });

  // Float trajectory: integrate the source, map it, test against target PV.
  const Binding<double> params = default_trajectory_params(false);
  const Binding<Scalar> sparams = lift_binding(params);
  const Mode m = Mode::kFloat;
  const PVValues tv = evaluate_params(target, sparams, m);
  TrajectoryResidual& tr_res = rep.trajectory;
  tr_res.id = id;
  tr_res.tolerance = tol;
  const Expr src_rhs = pv_rhs_expr(source);
  const Trajectory src = integrate_shrinking(
      [&](double t1) { return integrate_second_order(src_rhs, kY0, 0.0, kT0, t1, params, cfg); }, kT0, kT1,
      tr_res.detail);
  tr_res.t0 = src.t_begin();
  tr_res.t1 = src.t_end();
  std::vector<PVJet> mapped;
  mapped.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    const PVJet j{Scalar(src.t[i]), Scalar(src.x[i][0]), Scalar(src.x[i][1]), Scalar(src.dx[i][1])};
    const BacklundResult f = apply_composition(c, j, sparams, m);
    mapped.push_back(f.jet);
    tr_res.max_residual = std::max(tr_res.max_residual, scaled_residual(f.jet, tv));
    ++tr_res.points;
  }

  // Independent route: integrate the target equation from the mapped data,
  // stopping before the mapped curve nears the fixed singularities y = 0, 1,
  // which direct integration cannot cross reliably.
  double t_stop = tr_res.t1;
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    const double y = mapped[i].y.to_double();
    if (std::min(std::fabs(y), std::fabs(y - 1.0)) < 0.05) {
      t_stop = src.t[i > 0 ? i - 1 : 0];
      tr_res.detail += "direct comparison stops at t=" + format_double(t_stop) + " (y near a fixed singularity); ";
      break;
    }
  }
  const Expr tgt_rhs = pv_rhs_expr(target);
  const Trajectory tgt = integrate_shrinking(
      [&](double t1) {
        return integrate_second_order(tgt_rhs, mapped.front().y.to_double(), mapped.front().yp.to_double(),
                                      tr_res.t0, t1, params, cfg);
      },
      tr_res.t0, t_stop, tr_res.detail);
  for (std::size_t i = 0; i < src.size() && src.t[i] <= tgt.t_end(); ++i) {
    const double want = tgt.at(src.t[i])[0];
    const double d = std::fabs(mapped[i].y.to_double() - want) / std::max(std::fabs(want), 1.0);
    rep.target_deviation = std::max(rep.target_deviation, std::isfinite(d) ? d : INFINITY);
  }
  return rep;
}

}  // namespace kpv
