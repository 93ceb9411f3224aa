#include "driftmon/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "driftmon/errors.hpp"
#include "driftmon/rng.hpp"

namespace driftmon::preprocess {

namespace {

constexpr int kDaysInMonth[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

bool numeric_less_than(const Schema& schema, const Record& rec, const std::string& name,
                       double threshold) {
    const auto idx = schema.index_of(name);
    if (!idx || *idx >= rec.values.size()) return false;
    const Value& v = rec.values[*idx];
    return is_number(v) && as_number(v) < threshold;
}

std::string trim_lower(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    std::string out = s.substr(begin, end - begin);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

double median_of(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    return quantile_sorted(values, 0.5);
}

}  // namespace

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) {
        throw std::invalid_argument("quantile of empty vector");
    }
    if (q <= 0.0) return sorted.front();
    if (q >= 1.0) return sorted.back();
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

CleaningRuleSet CleaningRuleSet::defaults(const Schema& schema) {
    CleaningRuleSet set;
    if (schema.has_field("Departure_Airport") && schema.has_field("Arrival_Airport")) {
        set.rules.push_back(
            {"same_airports", [](const Schema& s, const Record& r) {
                 const auto a = s.index_of("Departure_Airport");
                 const auto b = s.index_of("Arrival_Airport");
                 if (!a || !b || *a >= r.values.size() || *b >= r.values.size()) return false;
                 const Value& va = r.values[*a];
                 const Value& vb = r.values[*b];
                 return is_text(va) && is_text(vb) && as_text(va) == as_text(vb);
             }});
    }
    for (const char* name : {"Distance_Miles", "Delay_Minutes", "Price_USD"}) {
        if (!schema.has_field(name)) continue;
        std::string rule_name = std::string("negative_") + name;
        std::string feature = name;
        set.rules.push_back({rule_name, [feature](const Schema& s, const Record& r) {
                                 return numeric_less_than(s, r, feature, 0.0);
                             }});
    }
    return set;
}

std::pair<Dataset, CleaningReport> clean(const Dataset& dataset, const CleaningRuleSet& rules) {
    if (rules.clip_lo <= 0.0 || rules.clip_hi >= 1.0 || rules.clip_lo >= rules.clip_hi) {
        throw std::invalid_argument("clean: clip quantiles must satisfy 0 < lo < hi < 1");
    }
    CleaningReport report;
    report.rows_in = dataset.records.size();

    Dataset out{dataset.schema, {}};
    out.records.reserve(dataset.records.size());
    for (const auto& rec : dataset.records) {
        bool invalid = false;
        for (const auto& rule : rules.rules) {
            if (rule.invalid(dataset.schema, rec)) {
                report.removed_by_rule[rule.name]++;
                invalid = true;
            }
        }
        if (invalid) {
            report.rows_removed++;
        } else {
            out.records.push_back(rec);
        }
    }
    if (out.records.empty() && report.rows_in > 0) {
        throw DataError("clean: every row was removed; input looks degenerate");
    }

    // Clamp numeric outliers to the clipping quantiles. Timestamp components
    // are ordering glue and stay untouched unless explicitly listed.
    std::vector<std::size_t> clip_indices;
    if (rules.clip_features.empty()) {
        const auto& ts = dataset.schema.timestamp_fields();
        for (std::size_t i = 0; i < dataset.schema.size(); ++i) {
            const auto& f = dataset.schema.field(i);
            if (f.kind != FeatureKind::Numeric) continue;
            if (f.name == ts.month || f.name == ts.day || f.name == ts.hour) continue;
            clip_indices.push_back(i);
        }
    } else {
        for (const auto& name : rules.clip_features) {
            clip_indices.push_back(dataset.schema.require_index(name));
        }
    }

    for (std::size_t idx : clip_indices) {
        std::vector<double> values;
        values.reserve(out.records.size());
        for (const auto& rec : out.records) {
            if (is_number(rec.values[idx])) values.push_back(as_number(rec.values[idx]));
        }
        if (values.size() < 2) continue;
        std::sort(values.begin(), values.end());
        const double lo = quantile_sorted(values, rules.clip_lo);
        const double hi = quantile_sorted(values, rules.clip_hi);
        std::size_t clipped = 0;
        for (auto& rec : out.records) {
            Value& v = rec.values[idx];
            if (!is_number(v)) continue;
            const double x = as_number(v);
            if (x < lo) {
                v = lo;
                ++clipped;
            } else if (x > hi) {
                v = hi;
                ++clipped;
            }
        }
        if (clipped > 0) {
            report.clipped_by_feature[dataset.schema.field(idx).name] = clipped;
        }
    }
    return {std::move(out), std::move(report)};
}

Dataset standardize_categoricals(const Dataset& dataset) {
    Dataset out = dataset;
    for (auto& rec : out.records) {
        for (std::size_t i = 0; i < rec.values.size() && i < out.schema.size(); ++i) {
            if (out.schema.field(i).kind == FeatureKind::Numeric) continue;
            if (is_text(rec.values[i])) {
                rec.values[i] = trim_lower(as_text(rec.values[i]));
            }
        }
    }
    return out;
}

std::pair<Dataset, EngineeringReport> engineer_features(const Dataset& dataset,
                                                        const EngineeringSpec& spec) {
    const std::size_t dist_idx = dataset.schema.require_index(spec.distance);
    const std::size_t dur_idx = dataset.schema.require_index(spec.duration);
    const std::size_t price_idx = dataset.schema.require_index(spec.price);

    EngineeringReport report;
    Dataset out{dataset.schema.with_numeric_fields({"Distance_per_Minute", "Price_per_Mile"}),
                dataset.records};

    // First pass: derived values where the denominator is nonzero.
    std::vector<double> dpm_values;
    std::vector<double> ppm_values;
    for (const auto& rec : dataset.records) {
        const Value& dist = rec.values[dist_idx];
        const Value& dur = rec.values[dur_idx];
        const Value& price = rec.values[price_idx];
        if (is_number(dist) && is_number(dur) && as_number(dur) != 0.0) {
            dpm_values.push_back(as_number(dist) / as_number(dur));
        }
        if (is_number(price) && is_number(dist) && as_number(dist) != 0.0) {
            ppm_values.push_back(as_number(price) / as_number(dist));
        }
    }
    const double dpm_median = median_of(dpm_values);
    const double ppm_median = median_of(ppm_values);

    for (auto& rec : out.records) {
        const Value& dist = rec.values[dist_idx];
        const Value& dur = rec.values[dur_idx];
        const Value& price = rec.values[price_idx];

        Value dpm{std::monostate{}};
        if (is_number(dist) && is_number(dur)) {
            if (as_number(dur) != 0.0) {
                dpm = as_number(dist) / as_number(dur);
            } else {
                dpm = dpm_median;
                report.zero_denominator_rows++;
                report.imputed_medians["Distance_per_Minute"] = dpm_median;
            }
        }
        Value ppm{std::monostate{}};
        if (is_number(price) && is_number(dist)) {
            if (as_number(dist) != 0.0) {
                ppm = as_number(price) / as_number(dist);
            } else {
                ppm = ppm_median;
                report.zero_denominator_rows++;
                report.imputed_medians["Price_per_Mile"] = ppm_median;
            }
        }
        rec.values.push_back(dpm);
        rec.values.push_back(ppm);
    }
    return {std::move(out), std::move(report)};
}

std::int64_t timestamp_minutes(int month, int day, int hour) {
    if (month < 1 || month > 12) {
        throw DataError("timestamp: month " + std::to_string(month) + " out of range 1..12");
    }
    if (day < 1 || day > kDaysInMonth[month - 1]) {
        throw DataError("timestamp: day " + std::to_string(day) + " out of range for month " +
                        std::to_string(month));
    }
    if (hour < 0 || hour > 23) {
        throw DataError("timestamp: hour " + std::to_string(hour) + " out of range 0..23");
    }
    std::int64_t days = 0;
    for (int m = 1; m < month; ++m) days += kDaysInMonth[m - 1];
    days += day - 1;
    return days * 24 * 60 + static_cast<std::int64_t>(hour) * 60;
}

Dataset build_timestamp(const Dataset& dataset) {
    const auto& ts = dataset.schema.timestamp_fields();
    const std::size_t month_idx = dataset.schema.require_index(ts.month);
    const std::size_t day_idx = dataset.schema.require_index(ts.day);
    const std::size_t hour_idx = dataset.schema.require_index(ts.hour);

    Dataset out = dataset;
    for (std::size_t i = 0; i < out.records.size(); ++i) {
        auto& rec = out.records[i];
        const Value& m = rec.values[month_idx];
        const Value& d = rec.values[day_idx];
        const Value& h = rec.values[hour_idx];
        if (!is_number(m) || !is_number(d) || !is_number(h)) {
            throw DataError("timestamp: record " + std::to_string(i) +
                            " has missing or non-numeric time components");
        }
        rec.timestamp = timestamp_minutes(static_cast<int>(as_number(m)),
                                          static_cast<int>(as_number(d)),
                                          static_cast<int>(as_number(h)));
    }
    return out;
}

FittedTransform fit_transform(const Dataset& train) {
    if (train.records.empty()) {
        throw DataError("fit_transform: empty training set");
    }
    const Schema& schema = train.schema;
    FittedTransform t;
    t.label_index = schema.label_index();

    // Label classes first; they double as a sanity check on the data.
    std::set<std::string> labels;
    for (std::size_t r = 0; r < train.records.size(); ++r) {
        const Value& v = train.records[r].values[t.label_index];
        if (!is_text(v)) {
            throw DataError("fit_transform: record " + std::to_string(r) + " has no label");
        }
        labels.insert(as_text(v));
    }
    t.class_names.assign(labels.begin(), labels.end());

    for (std::size_t i = 0; i < schema.size(); ++i) {
        const FieldSpec& field = schema.field(i);
        if (field.kind == FeatureKind::Label) continue;

        FittedFeature f;
        f.name = field.name;
        f.kind = field.kind;

        std::vector<double> column;
        column.reserve(train.records.size());
        if (field.kind == FeatureKind::Numeric) {
            std::vector<double> present;
            for (const auto& rec : train.records) {
                const Value& v = rec.values[i];
                if (is_number(v)) present.push_back(as_number(v));
            }
            f.impute_value = median_of(present);
            for (const auto& rec : train.records) {
                const Value& v = rec.values[i];
                column.push_back(is_number(v) ? as_number(v) : f.impute_value);
            }
        } else {
            std::map<std::string, std::size_t> freq;
            for (const auto& rec : train.records) {
                const Value& v = rec.values[i];
                if (is_text(v)) freq[as_text(v)]++;
            }
            if (freq.empty()) {
                t.dropped.push_back(f.name);
                continue;
            }
            f.categories.reserve(freq.size());
            for (const auto& [cat, _] : freq) f.categories.push_back(cat);
            // Mode; ties resolve to the lexicographically smallest category.
            f.impute_category = f.categories.front();
            std::size_t best = 0;
            for (const auto& [cat, count] : freq) {
                if (count > best) {
                    best = count;
                    f.impute_category = cat;
                }
            }
            const auto code_of = [&](const std::string& s) {
                const auto it = std::lower_bound(f.categories.begin(), f.categories.end(), s);
                return static_cast<double>(it - f.categories.begin());
            };
            for (const auto& rec : train.records) {
                const Value& v = rec.values[i];
                column.push_back(code_of(is_text(v) ? as_text(v) : f.impute_category));
            }
        }

        const double n = static_cast<double>(column.size());
        const double mean = std::accumulate(column.begin(), column.end(), 0.0) / n;
        double var = 0.0;
        for (double v : column) var += (v - mean) * (v - mean);
        var /= n;
        const double std_dev = std::sqrt(var);
        if (std_dev <= 0.0) {
            t.dropped.push_back(f.name);
            continue;
        }
        f.mean = mean;
        f.std = std_dev;
        t.features.push_back(std::move(f));
    }
    if (t.features.empty()) {
        throw DataError("fit_transform: every feature was dropped as zero-variance");
    }
    return t;
}

int class_index(const FittedTransform& t, const std::string& label) {
    const auto it = std::lower_bound(t.class_names.begin(), t.class_names.end(), label);
    if (it == t.class_names.end() || *it != label) return -1;
    return static_cast<int>(it - t.class_names.begin());
}

Encoded apply_transform(const FittedTransform& t, const Dataset& dataset) {
    Encoded enc;
    enc.feature_names.reserve(t.features.size());
    for (const auto& f : t.features) enc.feature_names.push_back(f.name);

    const std::size_t n = dataset.records.size();
    enc.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(t.features.size()));
    enc.y.resize(n);

    // Schema lookups once, not per record.
    std::vector<std::size_t> indices;
    indices.reserve(t.features.size());
    for (const auto& f : t.features) indices.push_back(dataset.schema.require_index(f.name));

    for (std::size_t r = 0; r < n; ++r) {
        const Record& rec = dataset.records[r];
        for (std::size_t c = 0; c < t.features.size(); ++c) {
            const FittedFeature& f = t.features[c];
            const Value& v = rec.values[indices[c]];
            double raw;
            if (f.kind == FeatureKind::Numeric) {
                if (is_number(v)) {
                    raw = as_number(v);
                } else if (is_missing(v)) {
                    raw = f.impute_value;
                } else {
                    throw DataError("apply_transform: record " + std::to_string(r) + ", feature '" +
                                    f.name + "': expected a number");
                }
            } else {
                std::string cat;
                if (is_text(v)) {
                    cat = as_text(v);
                } else if (is_missing(v)) {
                    cat = f.impute_category;
                } else {
                    throw DataError("apply_transform: record " + std::to_string(r) + ", feature '" +
                                    f.name + "': expected a category");
                }
                const auto it = std::lower_bound(f.categories.begin(), f.categories.end(), cat);
                if (it != f.categories.end() && *it == cat) {
                    raw = static_cast<double>(it - f.categories.begin());
                } else {
                    // Reserved code for unseen categories.
                    raw = static_cast<double>(f.categories.size());
                }
            }
            enc.X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                (raw - f.mean) / f.std;
        }

        const Value& label = rec.values[t.label_index];
        if (!is_text(label)) {
            throw DataError("apply_transform: record " + std::to_string(r) + " has no label");
        }
        const int cls = class_index(t, as_text(label));
        if (cls < 0) {
            throw DataError("apply_transform: record " + std::to_string(r) + " has unseen label '" +
                            as_text(label) + "'");
        }
        enc.y[r] = cls;
    }
    return enc;
}

SmoteResult smote_resample(const Matrix& X, const std::vector<int>& y, int k_neighbors,
                           std::uint64_t seed) {
    if (static_cast<std::size_t>(X.rows()) != y.size()) {
        throw std::invalid_argument("smote: X rows and y length differ");
    }
    if (k_neighbors < 1) {
        throw std::invalid_argument("smote: k_neighbors must be positive");
    }

    std::map<int, std::vector<int>> by_class;
    for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(static_cast<int>(i));
    std::size_t majority = 0;
    for (const auto& [cls, rows] : by_class) majority = std::max(majority, rows.size());

    std::size_t total = X.rows();
    for (const auto& [cls, rows] : by_class) total += majority - rows.size();

    SmoteResult result;
    result.X.resize(static_cast<Eigen::Index>(total), X.cols());
    result.X.topRows(X.rows()) = X;
    result.y = y;
    result.y.reserve(total);

    Rng rng(seed);
    Eigen::Index next = X.rows();
    for (const auto& [cls, rows] : by_class) {
        const std::size_t need = majority - rows.size();
        if (need == 0) continue;
        if (rows.size() < 2) {
            throw std::invalid_argument("smote: class " + std::to_string(cls) +
                                        " has a single sample and cannot be upsampled");
        }
        int k = k_neighbors;
        if (static_cast<std::size_t>(k) > rows.size() - 1) {
            k = static_cast<int>(rows.size() - 1);
            result.warnings.push_back("smote: class " + std::to_string(cls) +
                                      ": k_neighbors clamped to " + std::to_string(k));
        }

        // k nearest same-class neighbors per base row, memoized; ties resolve
        // by (distance, row index).
        std::vector<std::vector<int>> knn(rows.size());
        const auto neighbors_of = [&](std::size_t local) -> const std::vector<int>& {
            auto& cached = knn[local];
            if (!cached.empty()) return cached;
            std::vector<std::pair<double, int>> dist;
            dist.reserve(rows.size() - 1);
            for (std::size_t j = 0; j < rows.size(); ++j) {
                if (j == local) continue;
                const double d2 = (X.row(rows[j]) - X.row(rows[local])).squaredNorm();
                dist.emplace_back(d2, rows[j]);
            }
            std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
            cached.reserve(k);
            for (int j = 0; j < k; ++j) cached.push_back(dist[j].second);
            return cached;
        };

        for (std::size_t s = 0; s < need; ++s) {
            const std::size_t local = s % rows.size();
            const int base = rows[local];
            const auto& nns = neighbors_of(local);
            const int neighbor = nns[rng.index(nns.size())];
            const double u = rng.uniform();
            result.X.row(next) = X.row(base) + u * (X.row(neighbor) - X.row(base));
            result.y.push_back(cls);
            result.parents.emplace_back(base, neighbor);
            ++next;
        }
    }
    return result;
}

SplitResult train_test_split(const Dataset& dataset, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::invalid_argument("train_test_split: fraction must be in (0,1)");
    }
    const std::size_t label_idx = dataset.schema.label_index();
    std::map<std::string, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < dataset.records.size(); ++i) {
        const Value& v = dataset.records[i].values[label_idx];
        if (!is_text(v)) {
            throw DataError("train_test_split: record " + std::to_string(i) + " has no label");
        }
        by_class[as_text(v)].push_back(i);
    }

    SplitResult result{{dataset.schema, {}}, {dataset.schema, {}}, {}};
    std::vector<bool> in_train(dataset.records.size(), false);
    Rng rng(seed);
    for (auto& [cls, rows] : by_class) {
        rng.shuffle(rows);
        const auto n_train = static_cast<std::size_t>(
            std::llround(train_fraction * static_cast<double>(rows.size())));
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if (j < n_train) in_train[rows[j]] = true;
        }
        if (n_train == 0) {
            result.warnings.push_back("class '" + cls + "' absent from the training split");
        }
        if (n_train == rows.size()) {
            result.warnings.push_back("class '" + cls + "' absent from the test split");
        }
    }
    for (std::size_t i = 0; i < dataset.records.size(); ++i) {
        (in_train[i] ? result.train : result.test).records.push_back(dataset.records[i]);
    }
    return result;
}

}  // namespace driftmon::preprocess
