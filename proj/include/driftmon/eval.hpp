#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "driftmon/synthgen.hpp"
#include "driftmon/trust.hpp"

namespace driftmon::eval {

enum class DetectorKind { Statistical, AeOnly, TaeOnly, Hybrid };

DetectorKind detector_from_string(const std::string& s);
std::string to_string(DetectorKind kind);
std::vector<DetectorKind> all_detectors();

enum class Direction { Above, Below };

// Flag batch i iff scores[i] crosses the threshold in the stated direction.
std::vector<bool> flags_from_scores(const std::vector<double>& scores, double threshold,
                                    Direction direction);

struct BenchmarkResult {
    std::vector<bool> flags;
    std::set<int> truth;  // 1-based drifted batch indices
    double accuracy = 0.0;
    double f1 = 0.0;
    // Batches between the first drifted batch and the first flagged batch at
    // or after it; empty when never detected (or no drift injected).
    std::optional<double> latency;
};

// Per-batch confusion against the ground-truth drifted set.
BenchmarkResult detection_metrics(const std::vector<bool>& flags, const std::set<int>& truth);

struct DetectorThresholds {
    double psi = 0.2;   // the conventional moderate-drift level
    double jsd = 0.1;
    double z = 3.0;
};

// Flags one detector would raise on an existing monitoring run.
std::vector<bool> detector_flags(const trust::MonitoringRun& run, DetectorKind kind,
                                 const DetectorThresholds& thresholds,
                                 double trust_threshold);

struct BenchConfig {
    synthgen::GeneratorConfig generator;
    trust::PipelineConfig pipeline;
    synthgen::DriftSpec drift;
    DetectorThresholds thresholds;
    std::vector<DetectorKind> detectors = all_detectors();
    int trials = 5;
    std::uint64_t base_seed = 42;  // trial t uses base_seed + t
};

struct DetectorSummary {
    DetectorKind detector = DetectorKind::Statistical;
    double accuracy = 0.0;
    std::optional<double> latency;  // mean over trials that detected
    double f1 = 0.0;
};

// Runs the pipeline once per trial seed and scores every detector on the
// shared signals; metrics are averaged over trials in seed order.
std::vector<DetectorSummary> compare_detectors(const BenchConfig& config);

}  // namespace driftmon::eval
