#include "hamlab/lab/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hamlab/deformations.hpp"
#include "hamlab/error.hpp"
#include "hamlab/fock_nonlinear.hpp"
#include "hamlab/hilbert_finite.hpp"
#include "hamlab/phase_flow.hpp"

#ifndef HAMLAB_VERSION
#define HAMLAB_VERSION "0.0.0"
#endif

namespace hamlab::lab {

using nlohmann::json;

namespace {

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string optional_field(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_same_v<T, double>) {
    return number(*v);
  } else {
    return std::to_string(*v);
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string joined(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += sep;
    out += s;
  }
  return out;
}

json record_json(const ReportRecord& r) {
  json j;
  j["cell"] = r.cell;
  json coords = json::object();
  if (r.beta) coords["beta"] = *r.beta;
  if (r.energy) coords["energy"] = *r.energy;
  if (r.dimension) coords["dimension"] = *r.dimension;
  if (r.cutoff) coords["cutoff"] = *r.cutoff;
  if (r.sample) coords["sample"] = *r.sample;
  j["coords"] = coords;
  j["method"] = r.method;
  j["label"] = r.label;
  j["status"] = r.ok ? "ok" : "failed";
  j["value"] = r.value ? json(*r.value) : json(nullptr);
  j["error_bound"] = r.error_bound ? json(*r.error_bound) : json(nullptr);
  j["flags"] = r.flags;
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

}  // namespace

std::string records_csv(const RunResult& result) {
  std::ostringstream out;
  out << "experiment,cell,beta,energy,dimension,cutoff,sample,method,label,value,"
         "error_bound,status,flags,message\n";
  for (const auto& r : result.records) {
    out << csv_escape(result.config.id) << ',' << csv_escape(r.cell) << ','
        << optional_field(r.beta) << ',' << optional_field(r.energy) << ','
        << optional_field(r.dimension) << ',' << optional_field(r.cutoff) << ','
        << optional_field(r.sample) << ',' << csv_escape(r.method) << ','
        << csv_escape(r.label) << ',' << optional_field(r.value) << ','
        << optional_field(r.error_bound) << ',' << (r.ok ? "ok" : "failed") << ','
        << csv_escape(joined(r.flags, ';')) << ',' << csv_escape(r.message) << '\n';
  }
  return out.str();
}

json report_body(const RunResult& result) {
  json body;
  body["schema"] = kReportSchema;
  body["tool_version"] = HAMLAB_VERSION;
  body["catalogs"] = {
      {"systems", system_catalog()},
      {"deformations", known_deformations()},
      {"ladder_functions", fock::ladder_function_labels()},
      {"quantum_systems", quantum::test_hamiltonian_names()},
  };
  body["experiment"] = to_string(result.config.kind);
  body["id"] = result.config.id;
  body["config"] = canonical_json(result.config);
  body["config_hash"] = result.config_hash;
  body["seed"] = result.config.seed;
  body["verdicts"] = result.verdicts;
  body["contract"] = result.contract;
  body["contract_passed"] = result.contract_passed;
  body["contract_failures"] = result.contract_failures;
  json records = json::array();
  for (const auto& r : result.records) records.push_back(record_json(r));
  body["records"] = records;
  return body;
}

json report_envelope(const RunResult& result, const std::string& timestamp) {
  return {{"body", report_body(result)}, {"meta", {{"generated_at", timestamp}}}};
}

std::string summary_text(const RunResult& result) {
  std::ostringstream out;
  out << "experiment " << result.config.id << " (" << to_string(result.config.kind)
      << "), config " << result.config_hash << ", seed " << result.config.seed << '\n';
  std::size_t failed = 0;
  for (const auto& r : result.records) failed += r.ok ? 0 : 1;
  out << "  cells: " << result.records.size() << " (" << failed << " failed)\n";
  for (const auto& [name, verdict] : result.verdicts) {
    out << "  " << name << ": " << verdict << '\n';
  }
  if (result.contract) {
    out << "  contract: " << (result.contract_passed ? "passed" : "FAILED") << '\n';
    for (const auto& f : result.contract_failures) out << "    - " << f << '\n';
  } else {
    out << "  contract: none (exploratory)\n";
  }
  return out.str();
}

void write_report(const RunResult& result, const std::string& prefix) {
  const std::filesystem::path base(prefix);
  if (base.has_parent_path()) std::filesystem::create_directories(base.parent_path());
  auto write = [&](const std::string& suffix, const std::string& text) {
    std::ofstream out(prefix + suffix, std::ios::binary);
    if (!out) throw LabError(ErrorKind::Config, "cannot write '" + prefix + suffix + "'");
    out << text;
  };
  write(".csv", records_csv(result));
  write(".json", report_envelope(result, utc_timestamp()).dump(2) + "\n");
  write(".summary.txt", summary_text(result));
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace hamlab::lab
