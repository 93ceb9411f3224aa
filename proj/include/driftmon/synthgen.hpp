#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "driftmon/data_model.hpp"

namespace driftmon::synthgen {

// Airline-style stream: timestamp components, route, check-in channel,
// demographics, distance/duration/delay/price, and a class label.
Schema airline_schema();

struct GeneratorConfig {
    std::size_t rows = 20000;
    // {on_time, delayed, cancelled}
    std::array<double, 3> class_priors{0.70, 0.25, 0.05};

    // Distance is lognormal-ish, price affine in distance plus noise,
    // delay depends on the class.
    double distance_log_mean = 6.2;
    double distance_log_sd = 0.55;
    double price_base = 60.0;
    double price_per_mile = 0.12;
    double price_noise_sd = 18.0;
    double cruise_miles_per_minute = 7.0;

    // Fraction of deliberately dirty rows (same airports, missing cells,
    // negative delays) so that cleaning and imputation have work to do.
    double dirty_fraction = 0.012;

    std::vector<std::string> airports{"ATL", "BOM", "DEL", "DXB", "FRA",
                                      "JFK", "LAX", "LHR", "ORD", "SFO",
                                      "SIN", "SYD"};
    std::vector<std::string> checkin_types{"online", "kiosk", "counter"};

    std::uint64_t seed = 42;
};

// Deterministic given the seed. Labels correlate with delay and price so a
// classifier can beat chance; price is positively correlated with distance.
Dataset generate_dataset(const GeneratorConfig& config);

struct DriftSpec {
    enum class Mode { None, Permutation, Shift };

    Mode mode = Mode::None;
    std::string feature = "Price_USD";
    std::vector<int> batches{6, 7, 8, 9, 10};  // 1-based batch indices
    double magnitude = 2.0;                    // shift mode, in target-feature std devs
    std::uint64_t seed = 0;
};

DriftSpec::Mode drift_mode_from_string(const std::string& s);
std::string to_string(DriftSpec::Mode mode);

// Uniform random permutation of the feature column within the batch; every
// other column untouched, so the column's marginal distribution is preserved.
Batch inject_permutation_drift(const Batch& batch, const Schema& schema,
                               const std::string& feature, std::uint64_t seed);

// Adds magnitude * feature_std to every value of the feature. feature_std is
// the training-standardization std of that feature, supplied by the caller.
Batch inject_shift_drift(const Batch& batch, const Schema& schema,
                         const std::string& feature, double magnitude,
                         double feature_std);

}  // namespace driftmon::synthgen
