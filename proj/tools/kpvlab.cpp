// kpvlab: runs the verification suites and exposes the oracle, the
// integrator and the catalogue from the command line.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "kpv/catalogue.hpp"
#include "kpv/errors.hpp"
#include "kpv/integrate.hpp"
#include "kpv/orthopoly.hpp"
#include "kpv/suites.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string suite = "all";
  std::optional<std::uint64_t> seed;
  int samples = kpv::kDefaultSamples;
  std::optional<long> N;
  std::optional<long> n;
  std::optional<std::string> alpha;
  std::optional<std::string> t;
  std::string from_t = "1";
  std::string to_t = "2";
  std::optional<double> tol;
  std::string format = "text";
  std::string out;
  bool no_runtime = false;
  // integrate
  std::string system = "original";
  std::optional<double> x0, y0;
  bool derivatives = false;
};

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("KPV_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw kpv::Error(std::string("KPV_SEED is not an integer: ") + env);
    }
  }
  return kpv::kDefaultSeed;
}

// Writes to --out when given, else stdout.
template <class Fn>
void with_output(const std::string& path, Fn fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f) throw kpv::Error("cannot open " + path);
  fn(f);
  if (!f) throw kpv::Error("write failed: " + path);
}

kpv::RunConfig make_config(const Options& o) {
  kpv::RunConfig cfg;
  cfg.seed = resolve_seed(o);
  cfg.samples = o.samples;
  if (o.N) cfg.Ns = {*o.N};
  cfg.n = o.n;
  if (o.alpha) cfg.alphas = {kpv::Rational::parse(*o.alpha)};
  if (o.t) cfg.ts = {kpv::Rational::parse(*o.t)};
  cfg.from_t = kpv::Rational::parse(o.from_t);
  cfg.to_t = kpv::Rational::parse(o.to_t);
  if (o.tol) cfg.tol = *o.tol;
  return cfg;
}

int cmd_suite(const Options& o) {
  const kpv::ReportFormat fmt = kpv::parse_format(o.format);
  const kpv::SuiteReport r = kpv::run_suite(o.suite, make_config(o));
  with_output(o.out, [&](std::ostream& os) { kpv::emit_report(r, fmt, os, !o.no_runtime); });
  return r.overall() == kpv::Status::kPass ? kExitPass : kExitFail;
}

int cmd_oracle(const Options& o) {
  const kpv::WeightParams w{o.N.value_or(2), kpv::Rational::parse(o.alpha.value_or("0")),
                            kpv::Rational::parse(o.t.value_or("1"))};
  w.validate();
  const kpv::XYTable xy = kpv::oracle_xy(w, static_cast<int>(w.N));
  const kpv::XYTable it = kpv::iterate_discrete(w, static_cast<int>(w.N));
  with_output(o.out, [&](std::ostream& os) {
    if (o.format == "json") {
      nlohmann::ordered_json j;
      j["N"] = w.N;
      j["alpha"] = w.alpha.str();
      j["t"] = w.t.str();
      j["x"] = nlohmann::ordered_json::array();
      j["y"] = nlohmann::ordered_json::array();
      for (std::size_t k = 0; k < xy.x.size(); ++k) {
        j["x"].push_back(xy.x[k].str());
        j["y"].push_back(xy.y[k].str());
      }
      bool agree = true;
      for (std::size_t k = 0; k < xy.x.size(); ++k) agree = agree && xy.x[k] == it.x[k] && xy.y[k] == it.y[k];
      j["routes_agree"] = agree;
      os << j.dump(2) << '\n';
      return;
    }
    os << "k,x_k,y_k\n";
    for (std::size_t k = 0; k < xy.x.size(); ++k) os << k << ',' << xy.x[k] << ',' << xy.y[k] << '\n';
  });
  return kExitPass;
}

int cmd_integrate(const Options& o) {
  const kpv::PlanarSystem& s = kpv::get_system(o.system);
  const long N = o.N.value_or(2);
  const long n = o.n.value_or(1);
  const kpv::Rational alpha = kpv::Rational::parse(o.alpha.value_or("0"));
  const kpv::Rational t0 = kpv::Rational::parse(o.from_t);
  const double t1 = kpv::Rational::parse(o.to_t).to_double();
  kpv::State x0;
  if (o.x0 && o.y0) {
    x0 = {*o.x0, *o.y0};
  } else if (s.id == kpv::SystemId::kOriginal) {
    // Default initial data: the exact oracle values at from-t.
    const kpv::XYTable xy = kpv::oracle_xy({N, alpha, t0}, static_cast<int>(n));
    x0 = {xy.x[n].to_double(), xy.y[n].to_double()};
  } else {
    throw kpv::Error("--x0 and --y0 are required for system " + s.name);
  }
  const kpv::Binding<double> params{
      {"N", static_cast<double>(N)}, {"n", static_cast<double>(n)}, {"alpha", alpha.to_double()}};
  kpv::IntegratorConfig cfg;
  if (o.tol) cfg.rtol = *o.tol;
  const kpv::Trajectory tr = kpv::integrate_planar(s, x0, t0.to_double(), t1, params, cfg);
  with_output(o.out, [&](std::ostream& os) { kpv::write_csv(tr, os, o.derivatives); });
  return kExitPass;
}

int cmd_catalogue(const Options& o) {
  with_output(o.out, [](std::ostream& os) { os << kpv::catalogue_json(); });
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Verification workbench for the discrete Krawtchouk / Painleve V connection"};
  app.add_option("--suite", o.suite, "Suite to run: all, oracle, discrete, toda, ode, transforms, decompositions, "
                                     "regularity, pv, backlund, hamiltonian");
  app.add_option("--seed", o.seed, "Run seed (overrides KPV_SEED)");
  app.add_option("--samples", o.samples, "Random points per identity")->check(CLI::PositiveNumber);
  app.add_option("--N", o.N, "Restrict the sweep to this N")->check(CLI::PositiveNumber);
  app.add_option("--n", o.n, "Restrict the sweep to this n")->check(CLI::NonNegativeNumber);
  app.add_option("--alpha", o.alpha, "Restrict the sweep to this alpha (a or a/b)");
  app.add_option("--t", o.t, "Restrict the sweep to this t (a or a/b)");
  app.add_option("--from-t", o.from_t, "Integration start");
  app.add_option("--to-t", o.to_t, "Integration end");
  app.add_option("--tol", o.tol, "Float residual tolerance")->check(CLI::PositiveNumber);
  app.add_option("--format", o.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--out", o.out, "Output file (default stdout)");
  app.add_flag("--no-runtime", o.no_runtime, "Leave timing fields out of reports");

  app.fallthrough();  // subcommands accept the shared options
  CLI::App* oracle = app.add_subcommand("oracle", "Exact x_k, y_k table for one (N, alpha, t)");
  CLI::App* integrate = app.add_subcommand("integrate", "Integrate a planar system and write CSV");
  integrate->add_option("--system", o.system, "System id");
  integrate->add_option("--x0", o.x0, "First coordinate at from-t");
  integrate->add_option("--y0", o.y0, "Second coordinate at from-t");
  integrate->add_flag("--derivatives", o.derivatives, "Append d1,d2 columns");
  CLI::App* catalogue = app.add_subcommand("catalogue", "Dump the system registry as JSON");
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*oracle) return cmd_oracle(o);
    if (*integrate) return cmd_integrate(o);
    if (*catalogue) return cmd_catalogue(o);
    return cmd_suite(o);
  } catch (const kpv::UnknownId& e) {
    std::cerr << "kpvlab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const kpv::ParseError& e) {
    std::cerr << "kpvlab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const kpv::Error& e) {
    std::cerr << "kpvlab: " << e.what() << '\n';
    return kExitFail;
  }
}
