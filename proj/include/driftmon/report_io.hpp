#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "driftmon/eval.hpp"
#include "driftmon/trust.hpp"

namespace driftmon::report {

// Versioned trust report; field names are the contract for plot generation.
nlohmann::json trust_report_json(const trust::MonitoringRun& run,
                                 const trust::PipelineConfig& config,
                                 const synthgen::DriftSpec& drift);

// One row per batch, same field names as the JSON batches.
std::string trust_report_csv(const trust::MonitoringRun& run);

nlohmann::json bench_table_json(const std::vector<eval::DetectorSummary>& table);
std::string bench_table_csv(const std::vector<eval::DetectorSummary>& table);

// Plots are pure functions of the report JSON.
std::string svg_trust_plot(const nlohmann::json& report);
std::string svg_drift_metrics_plot(const nlohmann::json& report);
std::string svg_component_correlation(const nlohmann::json& report);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace driftmon::report
