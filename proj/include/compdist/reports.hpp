#pragma once

#include <filesystem>
#include <json.hpp>
#include <span>
#include <string>
#include <vector>

#include "compdist/dataset.hpp"
#include "compdist/estimation.hpp"
#include "compdist/fokker_planck.hpp"
#include "compdist/selection.hpp"

namespace compdist {

inline constexpr const char* kReportSchema = "composite-dist/1";

enum class ReportFormat { kCsv, kJson, kBoth };
ReportFormat parse_report_format(const std::string& name);

std::string table_csv(const SelectionTable& table);
nlohmann::json table_json(const SelectionTable& table);
SelectionTable table_from_json(const nlohmann::json& doc);

std::string counts_csv(const CountMatrix& counts);
nlohmann::json counts_json(const CountMatrix& counts);

/// Nine columns: n, mean, sd, mean_log, sd_log, skew_log, kurt_log, min, max
/// (one row per sample, preceded by its label).
std::string describe_csv(std::span<const std::string> labels,
                         std::span<const DescriptiveStats> stats);

/// Writes <sample_id>_table.{csv,json} per table and summary_counts.{csv,json}
/// into `dir`. Returns the paths written.
std::vector<std::filesystem::path> emit_reports(std::span<const SelectionTable> tables,
                                                const std::filesystem::path& dir,
                                                ReportFormat format);

/// {"model", "k", "n", "loglik", "params": {name: value}, "std_errors": {...}, ...}
nlohmann::json fit_json(const FittedModel& fit);

/// Drift field from {"model": "4LSt", "t0": 0, "t1": 1, "params_t0": [...],
/// "params_t1": [...], "window_t0": [a, b], "window_t1": [a, b], "s": 0.5,
/// "drift": "closed" | "generic"}. Windows are required for tt models;
/// "drift" defaults to the closed form for 4LSt and 5LSttt paths.
DriftField drift_field_from_json(const nlohmann::json& doc);

/// Canonical JSON text (sorted keys, two-space indent, trailing newline).
std::string dump_json(const nlohmann::json& doc);

}  // namespace compdist
