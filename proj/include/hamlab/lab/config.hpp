#pragma once

#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "json.hpp"

namespace hamlab::lab {

enum class ExperimentKind {
  ClassicalInvariance,
  CoordinateChange,
  GaussianND,
  PeriodProfile,
  QuantumFinite,
  FockTraces,
  BoundaryVsShell,
};

const char* to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);
std::vector<std::string> experiment_kinds();

/// One experiment. Fields that do not apply to `kind` keep their defaults
/// and are rejected when present in the config file.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::ClassicalInvariance;
  std::string id;

  std::string system = "ho";
  std::map<std::string, double> system_params;
  std::vector<std::string> deformations;
  double beta0 = 1.0;
  std::vector<double> betas;
  double h = 2.0 * std::numbers::pi;
  double tol = 1e-7;
  double contract_tol = 1e-5;
  std::uint64_t seed = 0;

  double emin = 1e-3;
  double emax = 1e3;
  int per_decade = 33;
  std::vector<std::string> methods;

  std::vector<int> dimensions{1, 2, 3};
  int samples = 20;

  std::vector<std::string> quantum_systems{"diag2", "diag4", "random_hermitian_8"};
  int structures = 20;
  int states = 100;

  std::vector<std::string> ladder_functions{"one_plus_tanh"};
  std::vector<int> cutoffs{64};
  std::vector<std::string> orderings{"f_first", "f_last"};

  double eps = 1e-6;

  // Execution settings; not part of the hashed configuration.
  int workers = 1;
  std::string output;
};

/// Parses and validates a JSON config. Unknown keys, wrong types and labels
/// missing from the catalogs raise LabError(Config) naming the field.
ExperimentConfig parse_config(const std::string& text,
                              const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Re-checks every field; run after command-line overrides.
void validate(const ExperimentConfig& config);

/// Normalized config with all defaults filled in, excluding workers and
/// output.
nlohmann::json canonical_json(const ExperimentConfig& config);

/// FNV-1a 64 of canonical_json(config).dump(), as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace hamlab::lab
