#include "hamlab/lab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "hamlab/deformations.hpp"
#include "hamlab/error.hpp"
#include "hamlab/fock_nonlinear.hpp"
#include "hamlab/hilbert_finite.hpp"
#include "hamlab/period_lab.hpp"
#include "hamlab/phase_flow.hpp"

namespace hamlab::lab {

using nlohmann::json;

namespace {

struct KindName {
  ExperimentKind kind;
  const char* name;
};

constexpr KindName kKinds[] = {
    {ExperimentKind::ClassicalInvariance, "classical_invariance"},
    {ExperimentKind::CoordinateChange, "coordinate_change"},
    {ExperimentKind::GaussianND, "gaussian_nd"},
    {ExperimentKind::PeriodProfile, "period_profile"},
    {ExperimentKind::QuantumFinite, "quantum_finite"},
    {ExperimentKind::FockTraces, "fock_traces"},
    {ExperimentKind::BoundaryVsShell, "boundary_vs_shell"},
};

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw LabError(ErrorKind::Config, "field '" + field + "': " + what);
}

const std::set<std::string>& allowed_keys(ExperimentKind kind) {
  static const std::set<std::string> common = {
      "experiment", "id", "tol", "contract_tol", "seed", "workers", "output"};
  static const std::map<ExperimentKind, std::set<std::string>> extra = {
      {ExperimentKind::ClassicalInvariance,
       {"system", "system_params", "deformations", "beta0", "betas", "h"}},
      {ExperimentKind::CoordinateChange, {"deformations", "beta0", "betas", "h"}},
      {ExperimentKind::GaussianND, {"dimensions", "samples", "betas", "h"}},
      {ExperimentKind::PeriodProfile,
       {"system", "system_params", "emin", "emax", "per_decade", "methods"}},
      {ExperimentKind::QuantumFinite,
       {"quantum_systems", "structures", "states", "betas"}},
      {ExperimentKind::FockTraces,
       {"ladder_functions", "cutoffs", "orderings", "betas"}},
      {ExperimentKind::BoundaryVsShell,
       {"system", "system_params", "betas", "h", "eps"}},
  };
  static std::map<ExperimentKind, std::set<std::string>> merged;
  static const bool built = [] {
    for (const auto& [k, keys] : extra) {
      auto all = common;
      all.insert(keys.begin(), keys.end());
      merged[k] = all;
    }
    return true;
  }();
  (void)built;
  return merged.at(kind);
}

void apply_defaults(ExperimentConfig& c) {
  switch (c.kind) {
    case ExperimentKind::ClassicalInvariance:
      c.betas = {0.1, 1.0, 10.0};
      c.deformations = DeformationCatalog::builtin().labels();
      break;
    case ExperimentKind::CoordinateChange:
      c.betas = {0.5, 1.0, 2.0};
      c.deformations = {"identity", "exp_ramp"};
      c.tol = 1e-9;
      break;
    case ExperimentKind::GaussianND:
      c.betas = {0.5, 1.0, 2.0};
      break;
    case ExperimentKind::PeriodProfile:
      c.betas = {};
      c.tol = 1e-10;
      break;
    case ExperimentKind::QuantumFinite:
    case ExperimentKind::FockTraces:
      c.betas = {0.5, 1.0, 2.0};
      break;
    case ExperimentKind::BoundaryVsShell:
      c.system = "ho_plus_quartic";
      c.betas = {1.0};
      c.tol = 1e-9;
      break;
  }
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number, got " + std::string(j.type_name()));
  return j.get<double>();
}

int get_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) {
    fail(field, "expected an integer, got " + std::string(j.type_name()));
  }
  return j.get<int>();
}

std::string get_string(const json& j, const std::string& field) {
  if (!j.is_string()) fail(field, "expected a string, got " + std::string(j.type_name()));
  return j.get<std::string>();
}

template <class T, class Getter>
std::vector<T> get_list(const json& j, const std::string& field, Getter getter) {
  if (!j.is_array()) fail(field, "expected an array, got " + std::string(j.type_name()));
  std::vector<T> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(getter(j[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::pair<int, int> line_and_column(const std::string& text, std::size_t byte) {
  int line = 1, column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

void check_positive_list(const std::vector<double>& values, const std::string& field) {
  if (values.empty()) fail(field, "must not be empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      fail(field + "[" + std::to_string(i) + "]", "must be finite and > 0");
    }
  }
}

void check_label(const std::string& label, const std::vector<std::string>& known,
                 const std::string& field, const std::string& catalog) {
  for (const auto& k : known) {
    if (k == label) return;
  }
  fail(field, "unknown " + catalog + " '" + label + "' (available: " + join(known) + ")");
}

}  // namespace

const char* to_string(ExperimentKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k.name;
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (const auto& k : kKinds) {
    if (name == k.name) return k.kind;
  }
  fail("experiment", "unknown experiment '" + name + "' (available: " +
                         join(experiment_kinds()) + ")");
}

std::vector<std::string> experiment_kinds() {
  std::vector<std::string> out;
  for (const auto& k : kKinds) out.emplace_back(k.name);
  return out;
}

void validate(const ExperimentConfig& c) {
  if (!(c.tol > 1e-14 && c.tol < 1e-1)) fail("tol", "must lie in (1e-14, 1e-1)");
  if (!(c.contract_tol > 1e-14 && c.contract_tol < 1e-1)) {
    fail("contract_tol", "must lie in (1e-14, 1e-1)");
  }
  if (!(c.h > 0.0) || !std::isfinite(c.h)) fail("h", "must be finite and > 0");
  if (c.workers < 1) fail("workers", "must be >= 1");
  if (c.kind != ExperimentKind::PeriodProfile) check_positive_list(c.betas, "betas");

  const bool classical = c.kind == ExperimentKind::ClassicalInvariance ||
                         c.kind == ExperimentKind::PeriodProfile ||
                         c.kind == ExperimentKind::BoundaryVsShell;
  if (classical) {
    check_label(c.system, system_catalog(), "system", "system");
    try {
      (void)make_system(c.system, c.system_params);
    } catch (const LabError& e) {
      fail("system_params", e.what());
    }
  }
  if (c.kind == ExperimentKind::ClassicalInvariance ||
      c.kind == ExperimentKind::CoordinateChange) {
    if (!(c.beta0 > 0.0) || !std::isfinite(c.beta0)) fail("beta0", "must be finite and > 0");
    for (std::size_t i = 0; i < c.deformations.size(); ++i) {
      const std::string field = "deformations[" + std::to_string(i) + "]";
      check_label(c.deformations[i], known_deformations(), field, "deformation");
      const auto screen = screen_deformation(make_deformation(c.deformations[i], c.beta0));
      if (!screen.passed) {
        fail(field, "deformation '" + c.deformations[i] +
                        "' rejected by the catalog screen: " + join(screen.failures));
      }
    }
  }
  if (c.kind == ExperimentKind::CoordinateChange && c.deformations.empty()) {
    fail("deformations", "must not be empty");
  }
  if (c.kind == ExperimentKind::PeriodProfile) {
    if (!(c.emin > 0.0 && c.emax > c.emin) || !std::isfinite(c.emax)) {
      fail("emin/emax", "need 0 < emin < emax < inf");
    }
    if (c.per_decade < 1) fail("per_decade", "must be >= 1");
    for (std::size_t i = 0; i < c.methods.size(); ++i) {
      try {
        (void)period_method_from_string(c.methods[i]);
      } catch (const LabError& e) {
        fail("methods[" + std::to_string(i) + "]", e.what());
      }
    }
  }
  if (c.kind == ExperimentKind::GaussianND) {
    if (c.dimensions.empty()) fail("dimensions", "must not be empty");
    for (int n : c.dimensions) {
      if (n < 1 || n > 64) fail("dimensions", "entries must lie in [1, 64]");
    }
    if (c.samples < 1) fail("samples", "must be >= 1");
  }
  if (c.kind == ExperimentKind::QuantumFinite) {
    if (c.quantum_systems.empty()) fail("quantum_systems", "must not be empty");
    for (std::size_t i = 0; i < c.quantum_systems.size(); ++i) {
      check_label(c.quantum_systems[i], quantum::test_hamiltonian_names(),
                  "quantum_systems[" + std::to_string(i) + "]", "quantum system");
    }
    if (c.structures < 1) fail("structures", "must be >= 1");
    if (c.states < 1) fail("states", "must be >= 1");
  }
  if (c.kind == ExperimentKind::FockTraces) {
    if (c.ladder_functions.empty()) fail("ladder_functions", "must not be empty");
    for (std::size_t i = 0; i < c.ladder_functions.size(); ++i) {
      check_label(c.ladder_functions[i], fock::ladder_function_labels(),
                  "ladder_functions[" + std::to_string(i) + "]", "ladder function");
    }
    if (c.cutoffs.empty()) fail("cutoffs", "must not be empty");
    for (int n : c.cutoffs) {
      if (n < 8 || n > 512) fail("cutoffs", "entries must lie in [8, 512]");
    }
    if (c.orderings.empty()) fail("orderings", "must not be empty");
    for (std::size_t i = 0; i < c.orderings.size(); ++i) {
      check_label(c.orderings[i], {"f_first", "f_last"},
                  "orderings[" + std::to_string(i) + "]", "ordering");
    }
  }
  if (c.kind == ExperimentKind::BoundaryVsShell) {
    if (!(c.eps > 0.0 && c.eps < 1e-2)) fail("eps", "must lie in (0, 1e-2)");
  }
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw LabError(ErrorKind::Config, source + ":" + std::to_string(line) + ":" +
                                          std::to_string(column) +
                                          ": malformed JSON (" + e.what() + ")");
  }
  if (!j.is_object()) fail("<root>", "expected a JSON object");
  if (!j.contains("experiment")) fail("experiment", "missing");

  ExperimentConfig c;
  c.kind = experiment_kind_from_string(get_string(j["experiment"], "experiment"));
  apply_defaults(c);
  c.id = to_string(c.kind);

  const auto& allowed = allowed_keys(c.kind);
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      std::vector<std::string> keys(allowed.begin(), allowed.end());
      fail(key, std::string("unknown key for experiment '") + to_string(c.kind) +
                    "' (allowed: " + join(keys) + ")");
    }
  }

  auto number = [&](const char* key, double& out) {
    if (j.contains(key)) out = get_number(j[key], key);
  };
  auto integer = [&](const char* key, int& out) {
    if (j.contains(key)) out = get_int(j[key], key);
  };
  auto strings = [&](const char* key, std::vector<std::string>& out) {
    if (j.contains(key)) out = get_list<std::string>(j[key], key, get_string);
  };
  auto integers = [&](const char* key, std::vector<int>& out) {
    if (j.contains(key)) out = get_list<int>(j[key], key, get_int);
  };

  if (j.contains("id")) c.id = get_string(j["id"], "id");
  if (j.contains("system")) c.system = get_string(j["system"], "system");
  if (j.contains("system_params")) {
    const auto& p = j["system_params"];
    if (!p.is_object()) fail("system_params", "expected an object");
    for (const auto& [key, value] : p.items()) {
      c.system_params[key] = get_number(value, "system_params." + key);
    }
  }
  strings("deformations", c.deformations);
  number("beta0", c.beta0);
  if (j.contains("betas")) c.betas = get_list<double>(j["betas"], "betas", get_number);
  number("h", c.h);
  number("tol", c.tol);
  number("contract_tol", c.contract_tol);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("seed", "expected a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  number("emin", c.emin);
  number("emax", c.emax);
  integer("per_decade", c.per_decade);
  strings("methods", c.methods);
  integers("dimensions", c.dimensions);
  integer("samples", c.samples);
  strings("quantum_systems", c.quantum_systems);
  integer("structures", c.structures);
  integer("states", c.states);
  strings("ladder_functions", c.ladder_functions);
  integers("cutoffs", c.cutoffs);
  strings("orderings", c.orderings);
  number("eps", c.eps);
  integer("workers", c.workers);
  if (j.contains("output")) c.output = get_string(j["output"], "output");

  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LabError(ErrorKind::Config, "cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

json canonical_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = to_string(c.kind);
  j["id"] = c.id;
  j["tol"] = c.tol;
  j["contract_tol"] = c.contract_tol;
  j["seed"] = c.seed;
  const auto& allowed = allowed_keys(c.kind);
  auto put = [&](const char* key, auto value) {
    if (allowed.count(key)) j[key] = value;
  };
  put("system", c.system);
  put("system_params", c.system_params);
  put("deformations", c.deformations);
  put("beta0", c.beta0);
  put("betas", c.betas);
  put("h", c.h);
  put("emin", c.emin);
  put("emax", c.emax);
  put("per_decade", c.per_decade);
  put("methods", c.methods);
  put("dimensions", c.dimensions);
  put("samples", c.samples);
  put("quantum_systems", c.quantum_systems);
  put("structures", c.structures);
  put("states", c.states);
  put("ladder_functions", c.ladder_functions);
  put("cutoffs", c.cutoffs);
  put("orderings", c.orderings);
  put("eps", c.eps);
  return j;
}

std::string config_hash(const ExperimentConfig& c) {
  const std::string text = canonical_json(c).dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char byte : text) {
    hash ^= byte;
    hash *= 0x100000001b3ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(hash));
  return out;
}

}  // namespace hamlab::lab
