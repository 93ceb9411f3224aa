#include "driftmon/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace driftmon::eval {

DetectorKind detector_from_string(const std::string& s) {
    if (s == "statistical") return DetectorKind::Statistical;
    if (s == "ae_only") return DetectorKind::AeOnly;
    if (s == "tae_only") return DetectorKind::TaeOnly;
    if (s == "hybrid") return DetectorKind::Hybrid;
    throw std::invalid_argument("unknown detector '" + s +
                                "' (statistical|ae_only|tae_only|hybrid)");
}

std::string to_string(DetectorKind kind) {
    switch (kind) {
        case DetectorKind::Statistical: return "statistical";
        case DetectorKind::AeOnly: return "ae_only";
        case DetectorKind::TaeOnly: return "tae_only";
        case DetectorKind::Hybrid: return "hybrid";
    }
    return "statistical";
}

std::vector<DetectorKind> all_detectors() {
    return {DetectorKind::Statistical, DetectorKind::AeOnly, DetectorKind::TaeOnly,
            DetectorKind::Hybrid};
}

std::vector<bool> flags_from_scores(const std::vector<double>& scores, double threshold,
                                    Direction direction) {
    std::vector<bool> flags(scores.size(), false);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        flags[i] = direction == Direction::Above ? scores[i] > threshold : scores[i] < threshold;
    }
    return flags;
}

BenchmarkResult detection_metrics(const std::vector<bool>& flags, const std::set<int>& truth) {
    const auto k = static_cast<int>(flags.size());
    if (k == 0) {
        throw std::invalid_argument("detection_metrics: no batches");
    }
    for (int b : truth) {
        if (b < 1 || b > k) {
            throw std::invalid_argument("detection_metrics: truth batch " + std::to_string(b) +
                                        " outside 1.." + std::to_string(k));
        }
    }

    BenchmarkResult result;
    result.flags = flags;
    result.truth = truth;

    int tp = 0, fp = 0, tn = 0, fn = 0;
    for (int b = 1; b <= k; ++b) {
        const bool flagged = flags[static_cast<std::size_t>(b - 1)];
        const bool drifted = truth.count(b) > 0;
        if (flagged && drifted) ++tp;
        else if (flagged && !drifted) ++fp;
        else if (!flagged && drifted) ++fn;
        else ++tn;
    }
    result.accuracy = static_cast<double>(tp + tn) / static_cast<double>(k);
    const int denom = 2 * tp + fp + fn;
    result.f1 = denom > 0 ? 2.0 * static_cast<double>(tp) / static_cast<double>(denom)
                          : (truth.empty() ? 1.0 : 0.0);

    if (!truth.empty()) {
        const int first_drifted = *truth.begin();
        for (int b = first_drifted; b <= k; ++b) {
            if (flags[static_cast<std::size_t>(b - 1)]) {
                result.latency = static_cast<double>(b - first_drifted);
                break;
            }
        }
    }
    return result;
}

std::vector<bool> detector_flags(const trust::MonitoringRun& run, DetectorKind kind,
                                 const DetectorThresholds& thresholds, double trust_threshold) {
    std::vector<bool> flags;
    flags.reserve(run.reports.size());
    for (const auto& report : run.reports) {
        const auto& s = report.signals;
        bool flag = false;
        switch (kind) {
            case DetectorKind::Statistical:
                flag = s.psi > thresholds.psi || s.jsd > thresholds.jsd;
                break;
            case DetectorKind::AeOnly: flag = s.ae_z > thresholds.z; break;
            case DetectorKind::TaeOnly: flag = s.tae_z > thresholds.z; break;
            case DetectorKind::Hybrid:
                flag = report.trust < trust_threshold || s.tae_z > thresholds.z;
                break;
        }
        flags.push_back(flag);
    }
    return flags;
}

std::vector<DetectorSummary> compare_detectors(const BenchConfig& config) {
    if (config.trials < 1) {
        throw std::invalid_argument("compare_detectors: need at least one trial");
    }
    if (config.detectors.empty()) {
        throw std::invalid_argument("compare_detectors: no detectors selected");
    }
    const auto& detectors = config.detectors;
    std::vector<DetectorSummary> table(detectors.size());
    std::vector<double> latency_sum(detectors.size(), 0.0);
    std::vector<int> latency_count(detectors.size(), 0);

    for (int trial = 0; trial < config.trials; ++trial) {
        auto generator = config.generator;
        generator.seed = config.base_seed + static_cast<std::uint64_t>(trial);
        auto pipeline = config.pipeline;
        pipeline.seed = generator.seed;

        const auto dataset = synthgen::generate_dataset(generator);
        const auto run = trust::run_monitoring(dataset, config.drift, pipeline);
        const std::set<int> truth(run.drifted_batches.begin(), run.drifted_batches.end());

        for (std::size_t d = 0; d < detectors.size(); ++d) {
            const auto flags =
                detector_flags(run, detectors[d], config.thresholds, pipeline.trust_threshold);
            const auto metrics = detection_metrics(flags, truth);
            table[d].detector = detectors[d];
            table[d].accuracy += metrics.accuracy;
            table[d].f1 += metrics.f1;
            if (metrics.latency) {
                latency_sum[d] += *metrics.latency;
                latency_count[d]++;
            }
        }
    }

    for (std::size_t d = 0; d < table.size(); ++d) {
        table[d].accuracy /= static_cast<double>(config.trials);
        table[d].f1 /= static_cast<double>(config.trials);
        if (latency_count[d] > 0) {
            table[d].latency = latency_sum[d] / static_cast<double>(latency_count[d]);
        }
    }
    return table;
}

}  // namespace driftmon::eval
