#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hamlab/lab/config.hpp"

namespace hamlab::lab {

/// One cell of a report table. Coordinates that do not apply stay empty.
struct ReportRecord {
  std::string cell;  // what the value is: z, tau, trace, residual, ...
  std::optional<double> beta;
  std::optional<double> energy;
  std::optional<int> dimension;
  std::optional<int> cutoff;
  std::optional<int> sample;
  std::string method;
  std::string label;
  std::optional<double> value;
  std::optional<double> error_bound;
  bool ok = true;
  std::vector<std::string> flags;
  std::string message;
};

struct RunResult {
  ExperimentConfig config;
  std::string config_hash;
  std::vector<ReportRecord> records;
  /// Named verdicts, e.g. "invariance" -> "invariant_within_tol".
  std::map<std::string, std::string> verdicts;
  /// Contract experiments gate the exit code; exploratory ones never do.
  bool contract = false;
  bool contract_passed = true;
  std::vector<std::string> contract_failures;
};

/// HAMLAB_WORKERS when set to a positive integer, otherwise config.workers.
int effective_workers(const ExperimentConfig& config);

/// Executes the experiment. Estimator failures are recorded per cell and do
/// not stop the run.
RunResult run(const ExperimentConfig& config);

/// 0 unless a contract experiment failed.
int exit_code(const RunResult& result);

}  // namespace hamlab::lab
