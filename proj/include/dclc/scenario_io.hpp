#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dclc/search.hpp"

namespace dclc {

inline constexpr int kSchemaVersion = 1;

// Everything a scenario file can carry. The scenario proper is what the
// simulator consumes; `distribution` and `policy` feed sweeps and `simulate`.
struct ScenarioDocument {
    Scenario scenario;
    ScenarioDistribution distribution;
    PolicyBundle policy;
};

ScenarioDocument parse_scenario_document(const std::string& text, const std::string& source,
                                         const std::filesystem::path& base_dir);
ScenarioDocument load_scenario_document(const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);

// Seeds are written inline, so the output does not depend on catalog files.
std::string serialize_scenario(const Scenario& scenario);
std::string serialize_policy(const PolicyBundle& bundle);

// Line-oriented catalogs: a header record, then one record per line.
std::vector<HardwareSku> parse_hardware_catalog(const std::string& text, const std::string& source);
std::vector<ModelSpec> parse_model_catalog(const std::string& text, const std::string& source);
std::vector<HardwareSku> load_hardware_catalog(const std::filesystem::path& path);
std::vector<ModelSpec> load_model_catalog(const std::filesystem::path& path);

// Report tables. Cells are pre-formatted; numeric columns are written bare in
// JSON and strings are quoted.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<bool> numeric;
    std::vector<std::vector<std::string>> rows;
};

std::string render_csv(const Table& table);
std::string render_json(const Table& table);

enum class ReportFormat { csv, json };
ReportFormat parse_report_format(std::string_view text);

Table fleet_timeline_table(const SimulationResult& result, std::uint64_t seed);
Table fleet_totals_table(const SimulationResult& result, std::uint64_t seed);
Table annual_tco_table(const SimulationResult& result, std::uint64_t seed);
Table events_table(const SimulationResult& result, std::uint64_t seed);
Table snapshot_table(const FacilitySnapshot& snapshot, const std::string& sku);
std::string simulation_summary(const SimulationResult& result, const PolicyBundle& bundle, std::uint64_t seed);

Table candidates_table(const std::vector<CandidateResult>& candidates, std::uint64_t seed);
Table distribution_table(const std::vector<CandidateResult>& candidates, std::uint64_t seed);
Table per_trial_table(const std::vector<CandidateResult>& candidates, std::uint64_t seed);
Table regime_matrix_table(const std::vector<RegimeCell>& cells, std::uint64_t seed);
std::string optimize_summary(const OptimizeResult& result, Objective objective, std::uint64_t seed);

// Writes `<out_dir>/<table.name>.<ext>`; creates the directory if needed.
void write_table(const std::filesystem::path& out_dir, const Table& table, ReportFormat format);
void write_text(const std::filesystem::path& path, const std::string& text);

// The only output that carries wall-clock time.
std::string run_metadata(const std::string& command, std::uint64_t seed, int trials, const std::string& scenario_path);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace dclc
