#include "kpv/report.hpp"

#include "json.hpp"

#include "kpv/errors.hpp"
#include "kpv/scalar.hpp"

namespace kpv {

std::string status_name(Status s) {
  switch (s) {
    case Status::kPass:
      return "PASS";
    case Status::kFail:
      return "FAIL";
    case Status::kSkip:
      return "SKIP";
  }
  return "FAIL";
}

namespace {

Status status_from_name(const std::string& s) {
  if (s == "PASS") return Status::kPass;
  if (s == "SKIP") return Status::kSkip;
  if (s == "FAIL") return Status::kFail;
  throw Error("bad status '" + s + "'");
}

// CSV field quoting for ids and details that may hold commas.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

CaseResult case_from_stats(const std::string& id, const SampleStats& st, std::uint64_t seed) {
  CaseResult c;
  c.id = id;
  c.status = st.passed() ? Status::kPass : Status::kFail;
  c.residual = st.max_residual.str();
  c.samples = st.samples;
  c.resamples = st.resamples;
  c.failures = st.failures;
  c.seed = seed;
  c.detail = st.first_failure;
  if (st.samples == 0 && c.detail.empty()) c.detail = "no admissible samples";
  return c;
}

Status SuiteReport::overall() const { return count(Status::kFail) == 0 ? Status::kPass : Status::kFail; }

int SuiteReport::count(Status s) const {
  int k = 0;
  for (const auto& c : cases) k += c.status == s ? 1 : 0;
  return k;
}

ReportFormat parse_format(const std::string& name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "text") return ReportFormat::kText;
  throw Error("unknown report format '" + name + "'");
}

std::string to_json(const SuiteReport& r, bool with_runtime) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["suite"] = r.suite;
  j["seed"] = r.seed;
  j["cases"] = ordered_json::array();
  for (const auto& c : r.cases) {
    ordered_json o;
    o["id"] = c.id;
    o["status"] = status_name(c.status);
    o["residual"] = c.residual;
    o["samples"] = c.samples;
    o["resamples"] = c.resamples;
    o["failures"] = c.failures;
    o["seed"] = c.seed;
    if (!c.detail.empty()) o["detail"] = c.detail;
    if (with_runtime) o["runtime_ms"] = format_double(c.runtime_ms);
    j["cases"].push_back(std::move(o));
  }
  j["overall"] = status_name(r.overall());
  return j.dump(2) + "\n";
}

SuiteReport from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    SuiteReport r;
    r.suite = j.at("suite").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& o : j.at("cases")) {
      CaseResult c;
      c.id = o.at("id").get<std::string>();
      c.status = status_from_name(o.at("status").get<std::string>());
      c.residual = o.at("residual").get<std::string>();
      c.samples = o.at("samples").get<int>();
      c.resamples = o.at("resamples").get<int>();
      c.failures = o.value("failures", 0);
      c.seed = o.value("seed", std::uint64_t{0});
      c.detail = o.value("detail", std::string{});
      if (o.contains("runtime_ms")) c.runtime_ms = std::stod(o.at("runtime_ms").get<std::string>());
      r.cases.push_back(std::move(c));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad report JSON: ") + e.what());
  }
}

void emit_report(const SuiteReport& r, ReportFormat f, std::ostream& os, bool with_runtime) {
  switch (f) {
    case ReportFormat::kJson:
      os << to_json(r, with_runtime);
      return;
    case ReportFormat::kCsv:
      os << "suite,id,status,residual,samples,resamples,failures,seed" << (with_runtime ? ",runtime_ms" : "")
         << '\n';
      for (const auto& c : r.cases) {
        os << csv_field(r.suite) << ',' << csv_field(c.id) << ',' << status_name(c.status) << ','
           << csv_field(c.residual) << ',' << c.samples << ',' << c.resamples << ',' << c.failures << ',' << c.seed;
        if (with_runtime) os << ',' << format_double(c.runtime_ms);
        os << '\n';
      }
      return;
    case ReportFormat::kText:
      for (const auto& c : r.cases) {
        os << status_name(c.status) << "  " << c.id << "  residual=" << c.residual << " samples=" << c.samples;
        if (c.resamples > 0) os << " resamples=" << c.resamples;
        if (!c.detail.empty()) os << "  (" << c.detail << ")";
        os << '\n';
      }
      os << "suite " << r.suite << ": " << r.cases.size() << " cases, " << r.count(Status::kFail) << " failed, seed "
         << r.seed << "  " << status_name(r.overall()) << '\n';
      return;
  }
}

}  // namespace kpv
