#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "driftmon/classifier.hpp"
#include "driftmon/data_model.hpp"
#include "driftmon/neural.hpp"
#include "driftmon/preprocess.hpp"
#include "driftmon/stat_drift.hpp"
#include "driftmon/synthgen.hpp"

namespace driftmon::trust {

struct Rule {
    enum class Op { LT, LE, GT, GE, EQ, NE };

    std::string name;
    std::string feature;
    Op op = Op::LT;
    std::variant<double, std::string> rhs;  // constant or other-feature reference
    std::string description;
};

Rule::Op op_from_string(const std::string& s);
std::string to_string(Rule::Op op);

// Distance_per_Minute outside [1, 12] mi/min; price <= 0; duration <= 0.
std::vector<Rule> default_rules(const Schema& schema);

// Throws std::invalid_argument when a rule references an unknown feature or
// compares incompatible kinds. Called at load time, not per batch.
void validate_rules(const Schema& schema, const std::vector<Rule>& rules);

struct RuleEvalResult {
    double violation_rate = 0.0;  // fraction of records breaking >= 1 rule
    std::map<std::string, std::size_t> per_rule;
};

RuleEvalResult evaluate_rules(const Batch& batch, const Schema& schema,
                              const std::vector<Rule>& rules);

// Nonnegative, normalized to sum 1 at construction.
struct TrustWeights {
    double alpha = 0.25;  // drift
    double beta = 0.25;   // uncertainty
    double gamma = 0.25;  // rule violations
    double delta = 0.25;  // error rate

    static TrustWeights normalized(double a, double b, double g, double d);
};

struct BatchSignals {
    int batch_index = 0;
    double psi = 0.0;
    double jsd = 0.0;
    double ae_delta = 0.0;
    double ae_z = 0.0;
    double tae_delta = 0.0;
    double tae_z = 0.0;
    double uncertainty = 0.0;    // U_t
    double rule_violation = 0.0; // R_t
    double accuracy = 0.0;       // A_t
    double error_rate = 0.0;     // E_t
};

// Which reconstruction signal feeds the drift component.
enum class DriftComponentMode { Tae, Ae, Both };

DriftComponentMode drift_component_mode_from_string(const std::string& s);
std::string to_string(DriftComponentMode mode);

// Reconstruction-error statistics over the designated clean batches, kept in
// delta space (relative to the model training baseline) so they compose with
// BatchSignals directly.
struct CalibrationStats {
    std::vector<int> batches{1, 2};
    double ae_mean_delta = 0.0;
    double ae_std = 0.0;
    double tae_mean_delta = 0.0;
    double tae_std = 0.0;
};

struct NormalizedComponents {
    double drift = 0.0;        // D-hat
    double uncertainty = 0.0;  // U-hat
    double rule = 0.0;         // R-hat
    double error = 0.0;        // E-hat
};

// D-hat = mean of (PSI/0.5 clamped to [0,1], JSD, z mapped by
// min(max(z,0)/6, 1)); U/R/E pass through unchanged.
NormalizedComponents normalize_components(const BatchSignals& signals,
                                          const CalibrationStats& calibration,
                                          DriftComponentMode mode = DriftComponentMode::Tae);

// Trust_t = 1 - (alpha*D + beta*U + gamma*R + delta*E), clamped to [0,1].
// Components outside [0,1] are upstream normalization bugs and throw.
double trust_score(const NormalizedComponents& c, const TrustWeights& w);

struct TrustReport {
    BatchSignals signals;
    NormalizedComponents components;
    TrustWeights weights;
    double trust = 0.0;
    bool drift_flag = false;
};

struct PipelineConfig {
    std::size_t k = 10;
    double train_fraction = 0.8;
    std::uint64_t seed = 42;

    neural::TrainConfig ae_train;
    neural::TrainConfig tae_train;
    classifier::GBDTConfig gbdt;
    statdrift::BinningSpec binning;

    PipelineConfig() {
        // The transformer converges well on a hotter schedule, which keeps a
        // full 20k-row run inside an interactive budget.
        tae_train.learning_rate = 3e-3;
        tae_train.patience = 12;
    }

    TrustWeights weights;
    double trust_threshold = 0.7;
    double z_threshold = 3.0;  // flag when the TAE z-score exceeds this
    DriftComponentMode drift_mode = DriftComponentMode::Tae;
    std::vector<int> calibration_batches{1, 2};
    int smote_k = 5;
};

struct MonitoringRun {
    std::vector<TrustReport> reports;
    CalibrationStats calibration;
    neural::BaselineStats ae_baseline;   // frozen training-error stats
    neural::BaselineStats tae_baseline;
    preprocess::CleaningReport cleaning;
    std::vector<std::string> feature_names;   // transformed-matrix columns
    std::vector<std::string> class_names;
    std::vector<std::string> dropped_features;
    double majority_prior = 0.0;              // majority class share, test split
    double holdout_accuracy = 0.0;            // classifier accuracy, test split
    std::map<std::string, std::vector<double>> per_feature_psi;  // feature -> per batch
    std::vector<int> drifted_batches;         // ground truth from the drift spec
};

// Full replay pipeline: preprocess -> split -> SMOTE -> classifier -> AE/TAE
// on clean training data -> per-batch signals -> trust scores and flags.
// `raw` is the unpreprocessed dataset (as generated or ingested from CSV).
MonitoringRun run_monitoring(const Dataset& raw, const synthgen::DriftSpec& drift,
                             const PipelineConfig& config);

}  // namespace driftmon::trust
