#pragma once

#include <string>

#include "hamlab/lab/runner.hpp"
#include "json.hpp"

namespace hamlab::lab {

inline constexpr const char* kReportSchema = "hamlab.report/1";

/// Cell table, one row per record. Numbers use %.17g; absent coordinates
/// are empty fields.
std::string records_csv(const RunResult& result);

/// Deterministic report body: schema, versions, config, hash, verdicts and
/// records. Contains no timestamps.
nlohmann::json report_body(const RunResult& result);

/// {"body": report_body, "meta": {"generated_at": timestamp}}
nlohmann::json report_envelope(const RunResult& result, const std::string& timestamp);

/// Human-readable summary with the verdicts and any contract failures.
std::string summary_text(const RunResult& result);

/// Writes <prefix>.csv, <prefix>.json and <prefix>.summary.txt.
void write_report(const RunResult& result, const std::string& prefix);

/// UTC time as ISO 8601.
std::string utc_timestamp();

}  // namespace hamlab::lab
