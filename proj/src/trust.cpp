#include "driftmon/trust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "driftmon/errors.hpp"
#include "driftmon/rng.hpp"

namespace driftmon::trust {

Rule::Op op_from_string(const std::string& s) {
    if (s == "<") return Rule::Op::LT;
    if (s == "<=") return Rule::Op::LE;
    if (s == ">") return Rule::Op::GT;
    if (s == ">=") return Rule::Op::GE;
    if (s == "==") return Rule::Op::EQ;
    if (s == "!=") return Rule::Op::NE;
    throw std::invalid_argument("unknown rule operator '" + s + "'");
}

std::string to_string(Rule::Op op) {
    switch (op) {
        case Rule::Op::LT: return "<";
        case Rule::Op::LE: return "<=";
        case Rule::Op::GT: return ">";
        case Rule::Op::GE: return ">=";
        case Rule::Op::EQ: return "==";
        case Rule::Op::NE: return "!=";
    }
    return "?";
}

std::vector<Rule> default_rules(const Schema& schema) {
    std::vector<Rule> rules;
    if (schema.has_field("Distance_per_Minute")) {
        rules.push_back({"dpm_too_low", "Distance_per_Minute", Rule::Op::LT, 1.0,
                         "distance per minute below 1 mi/min"});
        rules.push_back({"dpm_too_high", "Distance_per_Minute", Rule::Op::GT, 12.0,
                         "distance per minute above 12 mi/min"});
    }
    if (schema.has_field("Price_USD")) {
        rules.push_back({"nonpositive_price", "Price_USD", Rule::Op::LE, 0.0,
                         "ticket price must be positive"});
    }
    if (schema.has_field("Duration_Minutes")) {
        rules.push_back({"nonpositive_duration", "Duration_Minutes", Rule::Op::LE, 0.0,
                         "flight duration must be positive"});
    }
    return rules;
}

namespace {

bool numeric_op(Rule::Op op, double lhs, double rhs) {
    switch (op) {
        case Rule::Op::LT: return lhs < rhs;
        case Rule::Op::LE: return lhs <= rhs;
        case Rule::Op::GT: return lhs > rhs;
        case Rule::Op::GE: return lhs >= rhs;
        case Rule::Op::EQ: return lhs == rhs;
        case Rule::Op::NE: return lhs != rhs;
    }
    return false;
}

bool text_op(Rule::Op op, const std::string& lhs, const std::string& rhs) {
    switch (op) {
        case Rule::Op::EQ: return lhs == rhs;
        case Rule::Op::NE: return lhs != rhs;
        default: return false;
    }
}

}  // namespace

void validate_rules(const Schema& schema, const std::vector<Rule>& rules) {
    for (const auto& rule : rules) {
        const auto lhs = schema.index_of(rule.feature);
        if (!lhs) {
            throw std::invalid_argument("rule '" + rule.name + "': unknown feature '" +
                                        rule.feature + "'");
        }
        const bool lhs_numeric = schema.field(*lhs).kind == FeatureKind::Numeric;
        if (std::holds_alternative<double>(rule.rhs)) {
            if (!lhs_numeric) {
                throw std::invalid_argument("rule '" + rule.name +
                                            "': numeric constant against categorical feature");
            }
            continue;
        }
        const auto& text = std::get<std::string>(rule.rhs);
        const auto rhs = schema.index_of(text);
        if (rhs) {
            const bool rhs_numeric = schema.field(*rhs).kind == FeatureKind::Numeric;
            if (lhs_numeric != rhs_numeric) {
                throw std::invalid_argument("rule '" + rule.name +
                                            "': cannot compare numeric and categorical features");
            }
            if (!lhs_numeric && rule.op != Rule::Op::EQ && rule.op != Rule::Op::NE) {
                throw std::invalid_argument("rule '" + rule.name +
                                            "': categorical features support only == and !=");
            }
        } else {
            // String constant: only equality tests against categorical values.
            if (lhs_numeric) {
                throw std::invalid_argument("rule '" + rule.name + "': rhs '" + text +
                                            "' is neither a feature nor a number");
            }
            if (rule.op != Rule::Op::EQ && rule.op != Rule::Op::NE) {
                throw std::invalid_argument("rule '" + rule.name +
                                            "': categorical constants support only == and !=");
            }
        }
    }
}

RuleEvalResult evaluate_rules(const Batch& batch, const Schema& schema,
                              const std::vector<Rule>& rules) {
    RuleEvalResult result;
    for (const auto& rule : rules) result.per_rule[rule.name] = 0;
    if (batch.records.empty()) return result;

    std::size_t violators = 0;
    for (const auto& rec : batch.records) {
        bool violated = false;
        for (const auto& rule : rules) {
            const std::size_t lhs_idx = schema.require_index(rule.feature);
            const Value& lhs = rec.values[lhs_idx];
            if (is_missing(lhs)) continue;  // unknowable, not a violation

            bool hit = false;
            if (std::holds_alternative<double>(rule.rhs)) {
                if (is_number(lhs)) hit = numeric_op(rule.op, as_number(lhs), std::get<double>(rule.rhs));
            } else {
                const auto& text = std::get<std::string>(rule.rhs);
                const auto rhs_idx = schema.index_of(text);
                if (rhs_idx) {
                    const Value& rhs = rec.values[*rhs_idx];
                    if (is_missing(rhs)) continue;
                    if (is_number(lhs) && is_number(rhs)) {
                        hit = numeric_op(rule.op, as_number(lhs), as_number(rhs));
                    } else if (is_text(lhs) && is_text(rhs)) {
                        hit = text_op(rule.op, as_text(lhs), as_text(rhs));
                    }
                } else if (is_text(lhs)) {
                    hit = text_op(rule.op, as_text(lhs), text);
                }
            }
            if (hit) {
                result.per_rule[rule.name]++;
                violated = true;
            }
        }
        if (violated) ++violators;
    }
    result.violation_rate = static_cast<double>(violators) / static_cast<double>(batch.records.size());
    return result;
}

TrustWeights TrustWeights::normalized(double a, double b, double g, double d) {
    if (a < 0.0 || b < 0.0 || g < 0.0 || d < 0.0) {
        throw std::invalid_argument("trust weights must be nonnegative");
    }
    const double sum = a + b + g + d;
    if (sum <= 0.0 || !std::isfinite(sum)) {
        throw std::invalid_argument("trust weights must have a positive finite sum");
    }
    return TrustWeights{a / sum, b / sum, g / sum, d / sum};
}

DriftComponentMode drift_component_mode_from_string(const std::string& s) {
    if (s == "tae") return DriftComponentMode::Tae;
    if (s == "ae") return DriftComponentMode::Ae;
    if (s == "both") return DriftComponentMode::Both;
    throw std::invalid_argument("unknown drift component mode '" + s + "' (tae|ae|both)");
}

std::string to_string(DriftComponentMode mode) {
    switch (mode) {
        case DriftComponentMode::Tae: return "tae";
        case DriftComponentMode::Ae: return "ae";
        case DriftComponentMode::Both: return "both";
    }
    return "tae";
}

namespace {

double clamp01(double v) { return std::min(std::max(v, 0.0), 1.0); }

// min(max(z, 0) / 6, 1): z = 3 ("significant") lands mid-scale.
double z_term(double z) {
    if (std::isinf(z)) return z > 0.0 ? 1.0 : 0.0;
    return clamp01(std::max(z, 0.0) / 6.0);
}

double calibrated_z(double delta, double mean_delta, double std) {
    if (std > 0.0) return (delta - mean_delta) / std;
    return delta > mean_delta ? std::numeric_limits<double>::infinity() : 0.0;
}

void check_component(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument(std::string("trust component ") + name +
                                    " outside [0,1]: " + std::to_string(v));
    }
}

}  // namespace

NormalizedComponents normalize_components(const BatchSignals& signals,
                                          const CalibrationStats& calibration,
                                          DriftComponentMode mode) {
    if (calibration.batches.empty()) {
        throw std::invalid_argument("normalize_components: missing calibration");
    }
    const double psi_term = clamp01(signals.psi / 0.5);
    const double jsd_term = clamp01(signals.jsd);

    const double ae_z = calibrated_z(signals.ae_delta, calibration.ae_mean_delta, calibration.ae_std);
    const double tae_z =
        calibrated_z(signals.tae_delta, calibration.tae_mean_delta, calibration.tae_std);
    double recon_term = 0.0;
    switch (mode) {
        case DriftComponentMode::Tae: recon_term = z_term(tae_z); break;
        case DriftComponentMode::Ae: recon_term = z_term(ae_z); break;
        case DriftComponentMode::Both: recon_term = 0.5 * (z_term(ae_z) + z_term(tae_z)); break;
    }

    NormalizedComponents c;
    c.drift = (psi_term + jsd_term + recon_term) / 3.0;
    c.uncertainty = signals.uncertainty;
    c.rule = signals.rule_violation;
    c.error = signals.error_rate;
    return c;
}

double trust_score(const NormalizedComponents& c, const TrustWeights& w) {
    check_component(c.drift, "D");
    check_component(c.uncertainty, "U");
    check_component(c.rule, "R");
    check_component(c.error, "E");
    const double penalty =
        w.alpha * c.drift + w.beta * c.uncertainty + w.gamma * c.rule + w.delta * c.error;
    return clamp01(1.0 - penalty);
}

MonitoringRun run_monitoring(const Dataset& raw, const synthgen::DriftSpec& drift,
                             const PipelineConfig& config) {
    if (config.k < 2) {
        throw std::invalid_argument("run_monitoring: k must be at least 2");
    }
    if (drift.mode != synthgen::DriftSpec::Mode::None) {
        std::set<int> drifted(drift.batches.begin(), drift.batches.end());
        for (int b : drifted) {
            if (b < 1 || static_cast<std::size_t>(b) > config.k) {
                throw std::invalid_argument("run_monitoring: drift batch " + std::to_string(b) +
                                            " outside 1.." + std::to_string(config.k));
            }
        }
        for (int b : config.calibration_batches) {
            if (drifted.count(b)) {
                throw std::invalid_argument("run_monitoring: calibration batch " +
                                            std::to_string(b) + " is drift-injected");
            }
        }
    }
    for (int b : config.calibration_batches) {
        if (b < 1 || static_cast<std::size_t>(b) > config.k) {
            throw std::invalid_argument("run_monitoring: calibration batch " + std::to_string(b) +
                                        " outside 1.." + std::to_string(config.k));
        }
    }

    MonitoringRun run;

    // Preprocess: clean -> standardize -> engineer -> timestamps -> sort.
    auto [cleaned, cleaning_report] =
        preprocess::clean(raw, preprocess::CleaningRuleSet::defaults(raw.schema));
    run.cleaning = cleaning_report;
    Dataset prepared = preprocess::standardize_categoricals(cleaned);
    prepared = preprocess::engineer_features(prepared).first;
    prepared = preprocess::build_timestamp(prepared);
    prepared = sort_by_timestamp(prepared);

    const auto batches = partition_batches(prepared, config.k);

    // Training split comes from the clean stream; drift is injected only into
    // the evaluation copies of the batches.
    auto split =
        preprocess::train_test_split(prepared, config.train_fraction, derive_seed(config.seed, "split"));
    const auto transform = preprocess::fit_transform(split.train);
    run.dropped_features = transform.dropped;
    run.class_names = transform.class_names;

    const auto train_enc = preprocess::apply_transform(transform, split.train);
    const auto test_enc = preprocess::apply_transform(transform, split.test);
    run.feature_names = train_enc.feature_names;

    // Classifier trains on the SMOTE-balanced matrix; reconstruction models
    // see only real training rows.
    const auto smote = preprocess::smote_resample(train_enc.X, train_enc.y, config.smote_k,
                                                  derive_seed(config.seed, "smote"));
    auto gbdt = classifier::fit(smote.X, smote.y, transform.class_names, config.gbdt);

    neural::TrainConfig ae_cfg = config.ae_train;
    ae_cfg.seed = derive_seed(config.seed, "train.ae");
    neural::TrainConfig tae_cfg = config.tae_train;
    tae_cfg.seed = derive_seed(config.seed, "train.tae");
    const auto ae = neural::train_autoencoder(train_enc.X, ae_cfg);
    const auto tae = neural::train_transformer_ae(train_enc.X, tae_cfg);
    run.ae_baseline = ae.baseline();
    run.tae_baseline = tae.baseline();

    // Reference histograms per transformed feature, edges fitted on training.
    std::vector<statdrift::Histogram> references(train_enc.feature_names.size());
    for (std::size_t f = 0; f < train_enc.feature_names.size(); ++f) {
        std::vector<double> column(train_enc.X.rows());
        for (Eigen::Index i = 0; i < train_enc.X.rows(); ++i) {
            column[static_cast<std::size_t>(i)] = train_enc.X(i, static_cast<Eigen::Index>(f));
        }
        references[f] = statdrift::build_histogram(column, config.binning);
    }
    const auto headline_it = std::find(train_enc.feature_names.begin(),
                                       train_enc.feature_names.end(), prepared.schema.drift_target());
    if (headline_it == train_enc.feature_names.end()) {
        throw DataError("run_monitoring: drift target '" + prepared.schema.drift_target() +
                        "' missing from the transformed features");
    }
    const auto headline = static_cast<std::size_t>(headline_it - train_enc.feature_names.begin());

    // Raw-space std of the drift target over training rows, for shift mode.
    double target_std = 0.0;
    {
        const std::size_t idx = prepared.schema.require_index(prepared.schema.drift_target());
        std::vector<double> values;
        for (const auto& rec : split.train.records) {
            if (is_number(rec.values[idx])) values.push_back(as_number(rec.values[idx]));
        }
        if (values.size() > 1) {
            double mean = 0.0;
            for (double v : values) mean += v;
            mean /= static_cast<double>(values.size());
            double var = 0.0;
            for (double v : values) var += (v - mean) * (v - mean);
            target_std = std::sqrt(var / static_cast<double>(values.size()));
        }
    }

    const auto rules = default_rules(prepared.schema);
    validate_rules(prepared.schema, rules);

    std::set<int> drifted(drift.batches.begin(), drift.batches.end());
    if (drift.mode == synthgen::DriftSpec::Mode::None) drifted.clear();
    run.drifted_batches.assign(drifted.begin(), drifted.end());

    const std::uint64_t drift_base =
        drift.seed != 0 ? drift.seed : derive_seed(config.seed, "drift");

    struct PerBatch {
        BatchSignals signals;
        Eigen::VectorXd ae_errors;
        Eigen::VectorXd tae_errors;
    };
    std::vector<PerBatch> per_batch;
    per_batch.reserve(batches.size());

    for (const auto& batch : batches) {
        Batch evaluated = batch;
        if (drifted.count(batch.index)) {
            const std::uint64_t batch_seed =
                derive_seed(drift_base, "batch" + std::to_string(batch.index));
            if (drift.mode == synthgen::DriftSpec::Mode::Permutation) {
                evaluated = synthgen::inject_permutation_drift(evaluated, prepared.schema,
                                                               drift.feature, batch_seed);
            } else if (drift.mode == synthgen::DriftSpec::Mode::Shift) {
                evaluated = synthgen::inject_shift_drift(evaluated, prepared.schema, drift.feature,
                                                         drift.magnitude, target_std);
            }
        }

        const Dataset batch_ds{prepared.schema, evaluated.records};
        const auto enc = preprocess::apply_transform(transform, batch_ds);

        PerBatch pb;
        pb.signals.batch_index = batch.index;

        for (std::size_t f = 0; f < train_enc.feature_names.size(); ++f) {
            std::vector<double> column(enc.X.rows());
            for (Eigen::Index i = 0; i < enc.X.rows(); ++i) {
                column[static_cast<std::size_t>(i)] = enc.X(i, static_cast<Eigen::Index>(f));
            }
            const auto actual = statdrift::build_histogram(column, config.binning, &references[f]);
            const double feature_psi = statdrift::psi(references[f], actual);
            run.per_feature_psi[train_enc.feature_names[f]].push_back(feature_psi);
            if (f == headline) {
                pb.signals.psi = feature_psi;
                pb.signals.jsd = statdrift::jsd(references[f], actual);
            }
        }

        const auto ae_err = neural::reconstruction_error(ae, enc.X);
        const auto tae_err = neural::reconstruction_error(tae, enc.X);
        pb.ae_errors = ae_err.per_sample;
        pb.tae_errors = tae_err.per_sample;
        const auto ae_delta = neural::drift_delta_from(ae.baseline(), ae_err.mean);
        const auto tae_delta = neural::drift_delta_from(tae.baseline(), tae_err.mean);
        pb.signals.ae_delta = ae_delta.delta;
        pb.signals.ae_z = ae_delta.z;
        pb.signals.tae_delta = tae_delta.delta;
        pb.signals.tae_z = tae_delta.z;

        pb.signals.uncertainty = classifier::batch_uncertainty(gbdt, enc.X);
        const auto [accuracy, error] = classifier::batch_error(gbdt, enc.X, enc.y);
        pb.signals.accuracy = accuracy;
        pb.signals.error_rate = error;

        pb.signals.rule_violation = evaluate_rules(evaluated, prepared.schema, rules).violation_rate;

        per_batch.push_back(std::move(pb));
    }

    // Calibration: reconstruction-error stats over the designated clean
    // batches, in delta space relative to the training baselines.
    CalibrationStats calibration;
    calibration.batches = config.calibration_batches;
    {
        std::vector<double> ae_all;
        std::vector<double> tae_all;
        for (int b : config.calibration_batches) {
            const auto& pb = per_batch[static_cast<std::size_t>(b - 1)];
            for (Eigen::Index i = 0; i < pb.ae_errors.size(); ++i) {
                ae_all.push_back(pb.ae_errors(i) - ae.baseline().mean);
                tae_all.push_back(pb.tae_errors(i) - tae.baseline().mean);
            }
        }
        const auto stats = [](const std::vector<double>& v) {
            double mean = 0.0;
            for (double x : v) mean += x;
            mean /= static_cast<double>(v.size());
            double var = 0.0;
            for (double x : v) var += (x - mean) * (x - mean);
            const double std =
                v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
            return std::pair<double, double>{mean, std};
        };
        std::tie(calibration.ae_mean_delta, calibration.ae_std) = stats(ae_all);
        std::tie(calibration.tae_mean_delta, calibration.tae_std) = stats(tae_all);
    }
    run.calibration = calibration;

    for (const auto& pb : per_batch) {
        TrustReport report;
        report.signals = pb.signals;
        report.components = normalize_components(pb.signals, calibration, config.drift_mode);
        report.weights = config.weights;
        report.trust = trust_score(report.components, config.weights);
        report.drift_flag =
            report.trust < config.trust_threshold || pb.signals.tae_z > config.z_threshold;
        run.reports.push_back(report);
    }

    run.majority_prior = 0.0;
    {
        std::vector<std::size_t> counts(transform.class_names.size(), 0);
        for (int cls : test_enc.y) counts[static_cast<std::size_t>(cls)]++;
        for (std::size_t c = 0; c < counts.size(); ++c) {
            run.majority_prior = std::max(
                run.majority_prior,
                static_cast<double>(counts[c]) / static_cast<double>(test_enc.y.size()));
        }
    }
    run.holdout_accuracy = classifier::batch_error(gbdt, test_enc.X, test_enc.y).first;

    return run;
}

}  // namespace driftmon::trust
