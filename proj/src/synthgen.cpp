#include "driftmon/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "driftmon/rng.hpp"

namespace driftmon::synthgen {

namespace {

constexpr int kDaysInMonth[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

double round_to(double v, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(v * scale) / scale;
}

// Occasional raw-ish casing and padding so categorical standardization has
// something to normalize.
std::string messy_case(const std::string& s, Rng& rng) {
    const double u = rng.uniform();
    if (u < 0.4) {
        std::string upper = s;
        std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
        return upper;
    }
    if (u < 0.7) {
        std::string title = s;
        title[0] = static_cast<char>(::toupper(title[0]));
        return " " + title + " ";
    }
    return s + "  ";
}

}  // namespace

Schema airline_schema() {
    std::vector<FieldSpec> fields{
        {"Month", FeatureKind::Numeric, ""},
        {"Day", FeatureKind::Numeric, ""},
        {"Hour", FeatureKind::Numeric, ""},
        {"Departure_Airport", FeatureKind::Categorical, ""},
        {"Arrival_Airport", FeatureKind::Categorical, ""},
        {"Checkin_Type", FeatureKind::Categorical, ""},
        {"Passenger_Age", FeatureKind::Numeric, "years"},
        {"Distance_Miles", FeatureKind::Numeric, "mi"},
        {"Duration_Minutes", FeatureKind::Numeric, "min"},
        {"Delay_Minutes", FeatureKind::Numeric, "min"},
        {"Price_USD", FeatureKind::Numeric, "usd"},
        {"Flight_Status", FeatureKind::Label, ""},
    };
    return Schema(std::move(fields), "Price_USD", TimestampFields{"Month", "Day", "Hour"});
}

Dataset generate_dataset(const GeneratorConfig& config) {
    if (config.rows == 0) {
        throw std::invalid_argument("rows must be positive");
    }
    double prior_sum = 0.0;
    for (double p : config.class_priors) {
        if (p < 0.0) throw std::invalid_argument("class priors must be nonnegative");
        prior_sum += p;
    }
    if (std::abs(prior_sum - 1.0) > 1e-9) {
        throw std::invalid_argument("class priors must sum to 1");
    }
    if (config.airports.size() < 2) {
        throw std::invalid_argument("need at least two airports");
    }
    if (config.checkin_types.empty()) {
        throw std::invalid_argument("need at least one check-in type");
    }

    static const char* kLabels[3] = {"on_time", "delayed", "cancelled"};
    Rng rng(derive_seed(config.seed, "synthgen.generate"));
    Dataset ds{airline_schema(), {}};
    ds.records.reserve(config.rows);

    for (std::size_t row = 0; row < config.rows; ++row) {
        const double u = rng.uniform();
        int cls = 0;
        if (u >= config.class_priors[0]) cls = 1;
        if (u >= config.class_priors[0] + config.class_priors[1]) cls = 2;

        const int month = static_cast<int>(rng.uniform_int(12)) + 1;
        const int day = static_cast<int>(rng.uniform_int(kDaysInMonth[month - 1])) + 1;
        const int hour = static_cast<int>(rng.uniform_int(24));

        const std::size_t src = rng.index(config.airports.size());
        std::size_t dst = rng.index(config.airports.size() - 1);
        if (dst >= src) ++dst;

        const double cu = rng.uniform();
        std::size_t ci = cu < 0.55 ? 0 : (cu < 0.85 ? 1 : 2);
        ci = std::min(ci, config.checkin_types.size() - 1);
        std::string checkin = config.checkin_types[ci];
        if (rng.uniform() < 0.05) checkin = messy_case(checkin, rng);

        const double log_mean =
            cls == 2 ? config.distance_log_mean - 0.35 : config.distance_log_mean;
        double distance = clamp(rng.lognormal(log_mean, config.distance_log_sd), 80.0, 5000.0);
        double duration =
            std::max(20.0, distance / config.cruise_miles_per_minute + rng.normal(30.0, 8.0));

        // Delay distributions overlap and per-class price factors differ, so
        // the classifier has to combine delay with price-vs-distance signals.
        double delay = 0.0;
        double price_factor = 1.0;
        switch (cls) {
            case 0:
                delay = clamp(std::abs(rng.normal(0.0, 14.0)), 0.0, 50.0);
                price_factor = 1.0;
                break;
            case 1:
                delay = clamp(rng.normal(55.0, 30.0), 0.0, 360.0);
                price_factor = 1.35;
                break;
            case 2:
                delay = clamp(rng.normal(30.0, 20.0), 0.0, 240.0);
                price_factor = 0.72;
                break;
        }

        double price = config.price_base +
                       price_factor * config.price_per_mile * distance *
                           (1.0 + rng.normal(0.0, 0.05)) +
                       0.1 * delay + rng.normal(0.0, config.price_noise_sd);
        price = std::max(price, 25.0);

        const double age = clamp(std::round(rng.normal(41.0, 14.0)), 18.0, 90.0);

        Record rec;
        rec.values = {
            Value{static_cast<double>(month)},
            Value{static_cast<double>(day)},
            Value{static_cast<double>(hour)},
            Value{config.airports[src]},
            Value{config.airports[dst]},
            Value{checkin},
            Value{age},
            Value{round_to(distance, 1)},
            Value{round_to(duration, 1)},
            Value{round_to(delay, 1)},
            Value{round_to(price, 2)},
            Value{std::string(kLabels[cls])},
        };

        if (rng.uniform() < config.dirty_fraction) {
            switch (rng.uniform_int(4)) {
                case 0: rec.values[4] = config.airports[src]; break;       // same route
                case 1: rec.values[10] = std::monostate{}; break;          // missing price
                case 2: rec.values[9] = std::monostate{}; break;           // missing delay
                case 3: rec.values[9] = -round_to(rng.uniform(1.0, 30.0), 1); break;
            }
        }

        ds.records.push_back(std::move(rec));
    }
    return ds;
}

DriftSpec::Mode drift_mode_from_string(const std::string& s) {
    if (s == "none") return DriftSpec::Mode::None;
    if (s == "permutation") return DriftSpec::Mode::Permutation;
    if (s == "shift") return DriftSpec::Mode::Shift;
    throw std::invalid_argument("unknown drift mode '" + s + "' (none|permutation|shift)");
}

std::string to_string(DriftSpec::Mode mode) {
    switch (mode) {
        case DriftSpec::Mode::None: return "none";
        case DriftSpec::Mode::Permutation: return "permutation";
        case DriftSpec::Mode::Shift: return "shift";
    }
    return "none";
}

namespace {

std::size_t numeric_feature_index(const Schema& schema, const std::string& feature) {
    const std::size_t idx = schema.require_index(feature);
    if (schema.field(idx).kind != FeatureKind::Numeric) {
        throw std::invalid_argument("drift feature '" + feature + "' is not numeric");
    }
    return idx;
}

}  // namespace

Batch inject_permutation_drift(const Batch& batch, const Schema& schema,
                               const std::string& feature, std::uint64_t seed) {
    const std::size_t idx = numeric_feature_index(schema, feature);
    Batch out = batch;
    std::vector<Value> column;
    column.reserve(out.records.size());
    for (const auto& rec : out.records) column.push_back(rec.values[idx]);
    Rng rng(seed);
    rng.shuffle(column);
    for (std::size_t i = 0; i < out.records.size(); ++i) {
        out.records[i].values[idx] = std::move(column[i]);
    }
    return out;
}

Batch inject_shift_drift(const Batch& batch, const Schema& schema, const std::string& feature,
                         double magnitude, double feature_std) {
    if (batch.records.empty()) {
        throw std::invalid_argument("inject_shift_drift: empty batch");
    }
    if (!std::isfinite(magnitude) || !std::isfinite(feature_std)) {
        throw std::invalid_argument("inject_shift_drift: magnitude and std must be finite");
    }
    const std::size_t idx = numeric_feature_index(schema, feature);
    const double shift = magnitude * feature_std;
    Batch out = batch;
    for (auto& rec : out.records) {
        Value& v = rec.values[idx];
        if (is_number(v)) v = as_number(v) + shift;
    }
    return out;
}

}  // namespace driftmon::synthgen
