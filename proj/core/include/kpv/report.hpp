#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "kpv/sampling.hpp"

namespace kpv {

enum class Status { kPass, kFail, kSkip };
std::string status_name(Status s);

struct CaseResult {
  std::string id;
  Status status = Status::kFail;
  std::string residual;  // "num/den" for exact checks, 17 digits for floats
  int samples = 0;
  int resamples = 0;
  int failures = 0;
  std::uint64_t seed = 0;
  double runtime_ms = 0.0;
  std::string detail;
};

/// Fills samples, resamples, failures, residual and status from `st`.
CaseResult case_from_stats(const std::string& id, const SampleStats& st, std::uint64_t seed);

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CaseResult> cases;

  /// PASS iff no case failed.
  Status overall() const;
  int count(Status s) const;
};

enum class ReportFormat { kJson, kCsv, kText };
/// Throws Error on anything but json, csv or text.
ReportFormat parse_format(const std::string& name);

/// Stable field order. Runtime fields are left out when `with_runtime` is
/// false, which makes equal-seed runs byte-identical.
std::string to_json(const SuiteReport& r, bool with_runtime = true);
/// Parses what to_json wrote (runtime fields optional).
SuiteReport from_json(const std::string& text);

void emit_report(const SuiteReport& r, ReportFormat f, std::ostream& os, bool with_runtime = true);

}  // namespace kpv
