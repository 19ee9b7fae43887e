#pragma once

#include <string>
#include <vector>

#include "istat/cli/report.hpp"

namespace istat::cli {

enum class CheckStatus { Pass, Fail, Inconclusive };

std::string to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  std::string subject;  // sequence or set the check ran on
  std::string ideal;
  CheckStatus status = CheckStatus::Inconclusive;
  std::vector<std::string> details;
  Json evidence = Json::object();
};

Json to_json(const CheckResult& r);

struct SuiteOptions {
  AnalysisConfig cfg;
  std::uint64_t seed = 1;
  /// Corrupts the Gamma estimate before the inclusion check (test mode).
  bool inject_fault = false;
};

/// Every applicable property check on one sequence under one ideal.
std::vector<CheckResult> sequence_checks(const SequenceSpec& x, const Ideal& ideal, const SuiteOptions& opts);

/// The built-in suite over the shipped corpus.
std::vector<CheckResult> paper_core(const SuiteOptions& opts);

/// Ideals the built-in suite runs the sequence checks under.
std::vector<Ideal> suite_ideals();

/// 0 when every conclusive check passes, 1 on any failure, 2 when nothing
/// was conclusive.
int exit_code(const std::vector<CheckResult>& results);

}  // namespace istat::cli
