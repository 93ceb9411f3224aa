#include "driftmon/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "driftmon/csv.hpp"
#include "driftmon/errors.hpp"

namespace driftmon::report {

namespace {

using nlohmann::json;

// JSON has no infinities; clamp the (sentinel-only) non-finite values.
double json_safe(double v) {
    if (std::isnan(v)) return 0.0;
    if (std::isinf(v)) return v > 0 ? 1e308 : -1e308;
    return v;
}

constexpr const char* kBatchColumns[] = {
    "batch",       "psi",      "jsd",      "ae_delta", "ae_z",        "tae_delta",
    "tae_z",       "uncertainty", "rule_violation_rate", "accuracy", "error_rate",
    "d_hat",       "u_hat",    "r_hat",    "e_hat",    "trust",       "drift_flag",
};

json batch_entry(const trust::TrustReport& r) {
    const auto& s = r.signals;
    return json{{"batch", s.batch_index},
                {"psi", json_safe(s.psi)},
                {"jsd", json_safe(s.jsd)},
                {"ae_delta", json_safe(s.ae_delta)},
                {"ae_z", json_safe(s.ae_z)},
                {"tae_delta", json_safe(s.tae_delta)},
                {"tae_z", json_safe(s.tae_z)},
                {"uncertainty", json_safe(s.uncertainty)},
                {"rule_violation_rate", json_safe(s.rule_violation)},
                {"accuracy", json_safe(s.accuracy)},
                {"error_rate", json_safe(s.error_rate)},
                {"d_hat", json_safe(r.components.drift)},
                {"u_hat", json_safe(r.components.uncertainty)},
                {"r_hat", json_safe(r.components.rule)},
                {"e_hat", json_safe(r.components.error)},
                {"trust", json_safe(r.trust)},
                {"drift_flag", r.drift_flag}};
}

}  // namespace

json trust_report_json(const trust::MonitoringRun& run, const trust::PipelineConfig& config,
                       const synthgen::DriftSpec& drift) {
    json j;
    j["format"] = "driftmon-trust-report";
    j["version"] = 1;
    j["k"] = run.reports.size();
    j["drift"] = {{"mode", synthgen::to_string(drift.mode)},
                  {"feature", drift.feature},
                  {"batches", run.drifted_batches},
                  {"magnitude", drift.magnitude}};
    j["weights"] = {{"alpha", config.weights.alpha},
                    {"beta", config.weights.beta},
                    {"gamma", config.weights.gamma},
                    {"delta", config.weights.delta}};
    j["thresholds"] = {{"trust", config.trust_threshold}, {"tae_z", config.z_threshold}};
    j["drift_component_mode"] = trust::to_string(config.drift_mode);
    j["seed"] = config.seed;
    j["class_names"] = run.class_names;
    j["feature_names"] = run.feature_names;
    j["dropped_features"] = run.dropped_features;
    j["majority_prior"] = json_safe(run.majority_prior);
    j["holdout_accuracy"] = json_safe(run.holdout_accuracy);
    j["cleaning"] = {{"rows_in", run.cleaning.rows_in},
                     {"rows_removed", run.cleaning.rows_removed},
                     {"removed_by_rule", run.cleaning.removed_by_rule},
                     {"clipped_by_feature", run.cleaning.clipped_by_feature}};
    j["calibration"] = {{"batches", run.calibration.batches},
                        {"ae_mean_delta", json_safe(run.calibration.ae_mean_delta)},
                        {"ae_std", json_safe(run.calibration.ae_std)},
                        {"tae_mean_delta", json_safe(run.calibration.tae_mean_delta)},
                        {"tae_std", json_safe(run.calibration.tae_std)}};
    j["baselines"] = {{"ae", {{"mean", json_safe(run.ae_baseline.mean)},
                              {"std", json_safe(run.ae_baseline.std)}}},
                      {"tae", {{"mean", json_safe(run.tae_baseline.mean)},
                               {"std", json_safe(run.tae_baseline.std)}}}};
    json psi_map = json::object();
    for (const auto& [feature, values] : run.per_feature_psi) {
        json arr = json::array();
        for (double v : values) arr.push_back(json_safe(v));
        psi_map[feature] = std::move(arr);
    }
    j["per_feature_psi"] = std::move(psi_map);
    json batches = json::array();
    for (const auto& r : run.reports) batches.push_back(batch_entry(r));
    j["batches"] = std::move(batches);
    return j;
}

std::string trust_report_csv(const trust::MonitoringRun& run) {
    std::ostringstream out;
    for (std::size_t i = 0; i < std::size(kBatchColumns); ++i) {
        if (i) out << ',';
        out << kBatchColumns[i];
    }
    out << '\n';
    for (const auto& r : run.reports) {
        const auto& s = r.signals;
        out << s.batch_index << ',' << format_number(json_safe(s.psi)) << ','
            << format_number(json_safe(s.jsd)) << ',' << format_number(json_safe(s.ae_delta)) << ','
            << format_number(json_safe(s.ae_z)) << ',' << format_number(json_safe(s.tae_delta))
            << ',' << format_number(json_safe(s.tae_z)) << ','
            << format_number(json_safe(s.uncertainty)) << ','
            << format_number(json_safe(s.rule_violation)) << ','
            << format_number(json_safe(s.accuracy)) << ','
            << format_number(json_safe(s.error_rate)) << ','
            << format_number(json_safe(r.components.drift)) << ','
            << format_number(json_safe(r.components.uncertainty)) << ','
            << format_number(json_safe(r.components.rule)) << ','
            << format_number(json_safe(r.components.error)) << ','
            << format_number(json_safe(r.trust)) << ',' << (r.drift_flag ? "true" : "false")
            << '\n';
    }
    return out.str();
}

json bench_table_json(const std::vector<eval::DetectorSummary>& table) {
    json rows = json::array();
    for (const auto& row : table) {
        json r;
        r["detector"] = eval::to_string(row.detector);
        r["accuracy"] = json_safe(row.accuracy);
        if (row.latency) {
            r["latency_batches"] = json_safe(*row.latency);
        } else {
            r["latency_batches"] = nullptr;
        }
        r["f1"] = json_safe(row.f1);
        rows.push_back(std::move(r));
    }
    return json{{"format", "driftmon-benchmark"}, {"version", 1}, {"detectors", std::move(rows)}};
}

std::string bench_table_csv(const std::vector<eval::DetectorSummary>& table) {
    std::ostringstream out;
    out << "detector,accuracy,latency_batches,f1\n";
    for (const auto& row : table) {
        out << eval::to_string(row.detector) << ',' << format_number(json_safe(row.accuracy)) << ',';
        if (row.latency) out << format_number(json_safe(*row.latency));
        out << ',' << format_number(json_safe(row.f1)) << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// SVG plots

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

struct Series {
    std::string name;
    std::vector<double> values;
};

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(3);
    out << v;
    return out.str();
}

// One panel of line series over batch numbers 1..k.
void draw_panel(std::ostringstream& svg, double x0, double y0, double width, double height,
                const std::string& title, const std::vector<Series>& series, double y_min,
                double y_max, const std::vector<std::pair<std::string, double>>& hlines) {
    svg << "<rect x='" << x0 << "' y='" << y0 << "' width='" << width << "' height='" << height
        << "' fill='white' stroke='#888'/>\n";
    svg << "<text x='" << x0 + 4 << "' y='" << y0 - 6 << "' font-size='13' fill='#222'>" << title
        << "</text>\n";
    if (series.empty() || series.front().values.empty()) return;
    const std::size_t k = series.front().values.size();
    if (y_max <= y_min) y_max = y_min + 1.0;

    const auto px = [&](std::size_t i) {
        return k == 1 ? x0 + width / 2
                      : x0 + width * static_cast<double>(i) / static_cast<double>(k - 1);
    };
    const auto py = [&](double v) {
        v = std::min(std::max(v, y_min), y_max);
        return y0 + height - height * (v - y_min) / (y_max - y_min);
    };

    for (const auto& [label, value] : hlines) {
        svg << "<line x1='" << x0 << "' y1='" << py(value) << "' x2='" << x0 + width << "' y2='"
            << py(value) << "' stroke='#999' stroke-dasharray='5,4'/>\n";
        svg << "<text x='" << x0 + width - 4 << "' y='" << py(value) - 3
            << "' font-size='10' text-anchor='end' fill='#666'>" << label << "</text>\n";
    }

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % std::size(kPalette)];
        svg << "<polyline fill='none' stroke='" << color << "' stroke-width='1.6' points='";
        for (std::size_t i = 0; i < k; ++i) {
            svg << px(i) << ',' << py(series[s].values[i]) << ' ';
        }
        svg << "'/>\n";
        for (std::size_t i = 0; i < k; ++i) {
            svg << "<circle cx='" << px(i) << "' cy='" << py(series[s].values[i])
                << "' r='2.4' fill='" << color << "'/>\n";
        }
        svg << "<text x='" << x0 + 8 + 90 * static_cast<double>(s) << "' y='" << y0 + height + 16
            << "' font-size='11' fill='" << color << "'>" << series[s].name << "</text>\n";
    }

    // Batch ticks and y extremes.
    for (std::size_t i = 0; i < k; ++i) {
        svg << "<text x='" << px(i) << "' y='" << y0 + height + 30
            << "' font-size='10' text-anchor='middle' fill='#444'>" << (i + 1) << "</text>\n";
    }
    svg << "<text x='" << x0 - 4 << "' y='" << py(y_min) << "' font-size='10' text-anchor='end' "
        << "fill='#444'>" << fmt(y_min) << "</text>\n";
    svg << "<text x='" << x0 - 4 << "' y='" << py(y_max) + 8
        << "' font-size='10' text-anchor='end' fill='#444'>" << fmt(y_max) << "</text>\n";
}

std::vector<double> column(const json& report, const std::string& field) {
    std::vector<double> values;
    for (const auto& b : report.at("batches")) {
        values.push_back(b.at(field).get<double>());
    }
    return values;
}

double max_of(const std::vector<Series>& series) {
    double m = 0.0;
    for (const auto& s : series) {
        for (double v : s.values) m = std::max(m, v);
    }
    return m;
}

std::string svg_header(int width, int height) {
    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "' viewBox='0 0 " << width << ' ' << height << "'>\n"
        << "<rect width='100%' height='100%' fill='#fafafa'/>\n";
    return out.str();
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const auto n = static_cast<double>(a.size());
    if (a.size() != b.size() || a.size() < 2) return 0.0;
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
    }
    if (va <= 0.0 || vb <= 0.0) return 0.0;  // constant series: undefined, shown as 0
    return cov / std::sqrt(va * vb);
}

std::string heat_color(double corr) {
    corr = std::min(std::max(corr, -1.0), 1.0);
    // Blue (-1) -> white (0) -> red (+1).
    int r = 255, g = 255, b = 255;
    if (corr >= 0) {
        g = static_cast<int>(255 * (1.0 - corr));
        b = g;
    } else {
        r = static_cast<int>(255 * (1.0 + corr));
        g = r;
    }
    std::ostringstream out;
    out << "rgb(" << r << ',' << g << ',' << b << ")";
    return out.str();
}

}  // namespace

std::string svg_trust_plot(const json& report) {
    std::ostringstream svg;
    svg << svg_header(720, 360);
    std::vector<Series> series{{"trust", column(report, "trust")}};
    const double threshold = report.at("thresholds").at("trust").get<double>();
    draw_panel(svg, 60, 40, 600, 250, "Trust score over batches", series, 0.0, 1.0,
               {{"trust threshold " + fmt(threshold), threshold}});

    // Flagged batches marked on the trust line.
    const auto trust = series.front().values;
    const auto& batches = report.at("batches");
    for (std::size_t i = 0; i < trust.size(); ++i) {
        if (!batches[i].at("drift_flag").get<bool>()) continue;
        const double x = trust.size() == 1
                             ? 360.0
                             : 60 + 600 * static_cast<double>(i) / static_cast<double>(trust.size() - 1);
        const double y = 40 + 250 - 250 * trust[i];
        svg << "<circle cx='" << x << "' cy='" << y
            << "' r='5' fill='none' stroke='#d62728' stroke-width='2'/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string svg_drift_metrics_plot(const json& report) {
    std::ostringstream svg;
    svg << svg_header(720, 640);
    std::vector<Series> stat_series{{"psi", column(report, "psi")}, {"jsd", column(report, "jsd")}};
    std::vector<Series> recon_series{{"ae_z", column(report, "ae_z")},
                                     {"tae_z", column(report, "tae_z")}};
    draw_panel(svg, 60, 40, 600, 220, "Statistical drift (headline feature)", stat_series, 0.0,
               std::max(0.25, max_of(stat_series) * 1.05), {{"psi 0.2", 0.2}});
    const double z_threshold = report.at("thresholds").at("tae_z").get<double>();
    draw_panel(svg, 60, 360, 600, 220, "Reconstruction drift (z-scores)", recon_series,
               std::min(0.0, -0.05 * max_of(recon_series)),
               std::max(z_threshold * 1.4, max_of(recon_series) * 1.05),
               {{"z " + fmt(z_threshold), z_threshold}});
    svg << "</svg>\n";
    return svg.str();
}

std::string svg_component_correlation(const json& report) {
    const std::vector<std::string> fields{"psi",  "jsd",   "ae_z",       "tae_z",
                                          "uncertainty", "rule_violation_rate", "error_rate", "trust"};
    std::vector<std::vector<double>> data;
    data.reserve(fields.size());
    for (const auto& f : fields) data.push_back(column(report, f));

    const double cell = 58.0;
    const double x0 = 150.0;
    const double y0 = 120.0;
    const int width = static_cast<int>(x0 + cell * static_cast<double>(fields.size()) + 40);
    const int height = static_cast<int>(y0 + cell * static_cast<double>(fields.size()) + 40);

    std::ostringstream svg;
    svg << svg_header(width, height);
    svg << "<text x='" << x0 << "' y='30' font-size='14' fill='#222'>"
        << "Correlation of per-batch signals</text>\n";
    for (std::size_t i = 0; i < fields.size(); ++i) {
        for (std::size_t j = 0; j < fields.size(); ++j) {
            const double corr = pearson(data[i], data[j]);
            const double x = x0 + cell * static_cast<double>(j);
            const double y = y0 + cell * static_cast<double>(i);
            svg << "<rect x='" << x << "' y='" << y << "' width='" << cell << "' height='" << cell
                << "' fill='" << heat_color(corr) << "' stroke='#ccc'/>\n";
            svg << "<text x='" << x + cell / 2 << "' y='" << y + cell / 2 + 4
                << "' font-size='11' text-anchor='middle' fill='#222'>" << fmt(corr) << "</text>\n";
        }
        svg << "<text x='" << x0 - 6 << "' y='" << y0 + cell * static_cast<double>(i) + cell / 2 + 4
            << "' font-size='11' text-anchor='end' fill='#222'>" << fields[i] << "</text>\n";
        svg << "<text x='" << x0 + cell * static_cast<double>(i) + cell / 2 << "' y='" << y0 - 8
            << "' font-size='11' text-anchor='middle' fill='#222' "
            << "transform='rotate(-40 " << x0 + cell * static_cast<double>(i) + cell / 2 << ' '
            << y0 - 8 << ")'>" << fields[i] << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write '" + path + "'");
    }
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace driftmon::report
