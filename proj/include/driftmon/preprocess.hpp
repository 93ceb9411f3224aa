#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "driftmon/data_model.hpp"

namespace driftmon::preprocess {

using Matrix = Eigen::MatrixXd;

struct CleaningRule {
    std::string name;
    std::function<bool(const Schema&, const Record&)> invalid;  // true = drop row
};

struct CleaningRuleSet {
    std::vector<CleaningRule> rules;
    double clip_lo = 0.005;
    double clip_hi = 0.995;
    // Features to clip; empty means every numeric feature except the
    // timestamp components (those are ordering glue, not measurements).
    std::vector<std::string> clip_features;

    // Same departure/arrival airport; negative distance, delay, or price.
    static CleaningRuleSet defaults(const Schema& schema);
};

struct CleaningReport {
    std::size_t rows_in = 0;
    std::size_t rows_removed = 0;
    std::map<std::string, std::size_t> removed_by_rule;
    std::map<std::string, std::size_t> clipped_by_feature;
};

// Drops rows matching any rule, then clamps numeric values outside the
// clipping quantiles to the quantile value. Throws DataError if nothing
// survives.
std::pair<Dataset, CleaningReport> clean(const Dataset& dataset, const CleaningRuleSet& rules);

// Lowercases and trims every categorical value. Idempotent.
Dataset standardize_categoricals(const Dataset& dataset);

struct EngineeringSpec {
    std::string distance = "Distance_Miles";
    std::string duration = "Duration_Minutes";
    std::string price = "Price_USD";
};

struct EngineeringReport {
    std::size_t zero_denominator_rows = 0;
    std::map<std::string, double> imputed_medians;  // derived feature -> median used
};

// Adds Distance_per_Minute and Price_per_Mile. A zero denominator gets the
// derived feature's median (over well-defined rows); missing inputs leave the
// derived value missing for later imputation.
std::pair<Dataset, EngineeringReport> engineer_features(const Dataset& dataset,
                                                        const EngineeringSpec& spec = {});

// timestamp = minutes since Jan 1 of a fixed non-leap year, built from the
// schema's month/day/hour fields. Out-of-range components are DataErrors.
Dataset build_timestamp(const Dataset& dataset);

std::int64_t timestamp_minutes(int month, int day, int hour);

struct FittedFeature {
    std::string name;
    FeatureKind kind = FeatureKind::Numeric;
    // Scaling stats; for categoricals they describe the ordinal codes.
    double mean = 0.0;
    double std = 1.0;
    // Numeric imputation value (training median, raw space).
    double impute_value = 0.0;
    // Categorical code table: sorted category -> its index. Unseen values at
    // apply time map to categories.size().
    std::vector<std::string> categories;
    std::string impute_category;  // training mode
};

struct FittedTransform {
    std::vector<FittedFeature> features;   // retained, schema order
    std::vector<std::string> dropped;      // zero-variance features
    std::vector<std::string> class_names;  // sorted label values
    std::size_t label_index = 0;
};

// Fit scaling/encoding/imputation on the training partition only.
FittedTransform fit_transform(const Dataset& train);

struct Encoded {
    Matrix X;
    std::vector<int> y;  // indices into class_names
    std::vector<std::string> feature_names;
};

Encoded apply_transform(const FittedTransform& t, const Dataset& dataset);

int class_index(const FittedTransform& t, const std::string& label);

struct SmoteResult {
    Matrix X;
    std::vector<int> y;
    // For each synthetic row (rows beyond the originals): original-row
    // indices of the base sample and the chosen neighbor.
    std::vector<std::pair<int, int>> parents;
    std::vector<std::string> warnings;
};

// Upsamples every minority class to the majority count. Each synthetic point
// is x + u * (neighbor - x), u uniform in [0,1), neighbor among the k nearest
// same-class samples. Deterministic given the seed.
SmoteResult smote_resample(const Matrix& X, const std::vector<int>& y, int k_neighbors,
                           std::uint64_t seed);

struct SplitResult {
    Dataset train;
    Dataset test;
    std::vector<std::string> warnings;
};

// Stratified by label, deterministic given the seed.
SplitResult train_test_split(const Dataset& dataset, double train_fraction, std::uint64_t seed);

// Linear-interpolation empirical quantile of a sorted vector (q in [0,1]).
double quantile_sorted(const std::vector<double>& sorted, double q);

}  // namespace driftmon::preprocess
