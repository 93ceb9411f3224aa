#include "driftmon/stat_drift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "driftmon/preprocess.hpp"

namespace driftmon::statdrift {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> equal_width_edges(double lo, double hi, std::size_t bins) {
    std::vector<double> edges(bins + 1);
    edges[0] = -kInf;
    edges[bins] = kInf;
    for (std::size_t i = 1; i < bins; ++i) {
        edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
    }
    return edges;
}

std::vector<double> fit_edges(const std::vector<double>& values, const BinningSpec& spec) {
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.front();
    const double hi = sorted.back();
    if (lo == hi) {
        // Degenerate constant feature: equal width around the constant.
        return equal_width_edges(lo - 1.0, hi + 1.0, spec.bins);
    }
    if (spec.strategy == BinningSpec::Strategy::EqualWidth) {
        return equal_width_edges(lo, hi, spec.bins);
    }
    std::vector<double> edges(spec.bins + 1);
    edges[0] = -kInf;
    edges[spec.bins] = kInf;
    for (std::size_t i = 1; i < spec.bins; ++i) {
        edges[i] = preprocess::quantile_sorted(
            sorted, static_cast<double>(i) / static_cast<double>(spec.bins));
    }
    return edges;
}

}  // namespace

Histogram build_histogram(const std::vector<double>& values, const BinningSpec& spec,
                          const Histogram* reference) {
    if (values.empty()) {
        throw std::invalid_argument("build_histogram: empty input");
    }
    if (spec.bins < 2) {
        throw std::invalid_argument("build_histogram: need at least 2 bins");
    }
    if (spec.epsilon <= 0.0) {
        throw std::invalid_argument("build_histogram: epsilon must be positive");
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("build_histogram: non-finite value");
        }
    }

    Histogram h;
    h.edges = reference ? reference->edges : fit_edges(values, spec);
    const std::size_t bins = h.edges.size() - 1;

    std::vector<std::size_t> counts(bins, 0);
    for (double v : values) {
        // First bin whose upper edge is above v; interior edges are half-open
        // [edge_i, edge_{i+1}).
        const auto it = std::upper_bound(h.edges.begin() + 1, h.edges.end() - 1, v);
        counts[static_cast<std::size_t>(it - h.edges.begin()) - 1]++;
    }

    const double n = static_cast<double>(values.size());
    const double denom = n + static_cast<double>(bins) * spec.epsilon;
    h.proportions.resize(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        h.proportions[i] = (static_cast<double>(counts[i]) + spec.epsilon) / denom;
    }
    return h;
}

double psi(const Histogram& expected, const Histogram& actual) {
    if (expected.edges != actual.edges) {
        throw std::invalid_argument("psi: histograms have different edges");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < expected.proportions.size(); ++i) {
        const double e = expected.proportions[i];
        const double a = actual.proportions[i];
        total += (a - e) * std::log(a / e);
    }
    return total;
}

double kl_divergence(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("kl_divergence: length mismatch");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;  // 0 * log(0/q) = 0
        if (q[i] <= 0.0) {
            throw std::invalid_argument("kl_divergence: q must be strictly positive where p > 0");
        }
        total += p[i] * std::log2(p[i] / q[i]);
    }
    return total;
}

double jsd(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("jsd: length mismatch");
    }
    std::vector<double> m(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        m[i] = 0.5 * (p[i] + q[i]);
    }
    return 0.5 * kl_divergence(p, m) + 0.5 * kl_divergence(q, m);
}

double jsd(const Histogram& a, const Histogram& b) { return jsd(a.proportions, b.proportions); }

}  // namespace driftmon::statdrift
