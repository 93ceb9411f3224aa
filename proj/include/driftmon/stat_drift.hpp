#pragma once

#include <cstddef>
#include <vector>

namespace driftmon::statdrift {

struct BinningSpec {
    enum class Strategy { EqualWidth, ReferenceQuantile };

    std::size_t bins = 10;
    Strategy strategy = Strategy::ReferenceQuantile;
    double epsilon = 1e-6;  // additive smoothing per bin
};

// Binned distribution of one numeric feature. Edges are ascending with the
// outermost at -inf/+inf; proportions are smoothed so each bin is > 0.
struct Histogram {
    std::vector<double> edges;        // bins + 1
    std::vector<double> proportions;  // bins

    std::size_t bins() const { return proportions.size(); }
};

// Expected side defines the binning; pass it as `reference` when building the
// actual side so both histograms share edges.
Histogram build_histogram(const std::vector<double>& values, const BinningSpec& spec,
                          const Histogram* reference = nullptr);

// PSI = sum (A_i - E_i) * ln(A_i / E_i). Requires identical edges.
double psi(const Histogram& expected, const Histogram& actual);

// KL divergence with base-2 logs and the 0*log(0/q) = 0 convention.
double kl_divergence(const std::vector<double>& p, const std::vector<double>& q);

// Jensen-Shannon divergence, base-2 logs: symmetric, in [0, 1].
double jsd(const std::vector<double>& p, const std::vector<double>& q);
double jsd(const Histogram& a, const Histogram& b);

}  // namespace driftmon::statdrift
