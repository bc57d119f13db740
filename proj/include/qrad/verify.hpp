#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "qrad/bounds.hpp"

namespace qrad {

struct VerifyConfig {
  std::vector<std::string> suites{"all"};
  std::vector<std::size_t> dims{2, 3, 4};
  std::vector<double> qs{0.1, 0.3, 0.5, 0.7, 0.9};
  int trials = 50;
  std::uint64_t seed = 1;
  Effort effort = kVerifyEffort;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Throws ParamOutOfRange unless dims ⊂ {2..8}, qs ⊂ (0, 1], trials ≥ 1 and
/// every suite is known. "all" expands to every suite.
std::vector<std::string> resolve_suites(const VerifyConfig& cfg);

struct VerifyResult {
  std::vector<IneqReport> reports;
  long checks_run = 0;
  long failures = 0;
  std::map<std::string, double> min_slack_per_suite;
  CertificateAudit audit;
};

/// The reports of one (suite, block size, q, trial) cell of the sweep.
std::vector<IneqReport> run_trial(std::string_view suite, std::size_t dim, double q, int trial, std::uint64_t seed,
                                  Effort effort, CertificateAudit* audit);

/// Runs every cell, in parallel when threads allow; the report order is the
/// cell order regardless of scheduling.
VerifyResult run_verify(const VerifyConfig& cfg);

nlohmann::json verify_to_json(const VerifyConfig& cfg, const VerifyResult& result);

}  // namespace qrad
