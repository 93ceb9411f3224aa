#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "driftmon/csv.hpp"
#include "driftmon/errors.hpp"
#include "driftmon/eval.hpp"
#include "driftmon/report_io.hpp"
#include "driftmon/synthgen.hpp"
#include "driftmon/trust.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace driftmon;

namespace {

// "6-10" or "6,8,9" -> batch indices.
std::vector<int> parse_batches(const std::string& text) {
    std::vector<int> batches;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        const auto dash = token.find('-');
        if (dash != std::string::npos && dash > 0) {
            const int lo = std::stoi(token.substr(0, dash));
            const int hi = std::stoi(token.substr(dash + 1));
            if (hi < lo) throw std::invalid_argument("bad batch range '" + token + "'");
            for (int b = lo; b <= hi; ++b) batches.push_back(b);
        } else {
            batches.push_back(std::stoi(token));
        }
    }
    if (batches.empty()) throw std::invalid_argument("empty batch list");
    return batches;
}

std::vector<double> parse_weights(const std::string& text) {
    std::vector<double> weights;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) weights.push_back(std::stod(token));
    if (weights.size() != 4) {
        throw std::invalid_argument("--weights expects four comma-separated values a,b,c,d");
    }
    return weights;
}

struct Options {
    std::string out = "out";
    std::optional<std::string> input;
    std::size_t rows = 20000;
    std::uint64_t seed = 42;
    std::size_t k = 10;
    synthgen::DriftSpec drift{synthgen::DriftSpec::Mode::Permutation};
    trust::PipelineConfig pipeline;
    eval::DetectorThresholds thresholds;
    std::vector<eval::DetectorKind> detectors = eval::all_detectors();
    int trials = 5;
    std::optional<Schema> schema;
};

// Flags parsed aside so they can override the config file afterwards.
struct Overrides {
    std::optional<std::string> out;
    std::optional<std::string> input;
    std::optional<std::size_t> rows;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> k;
    std::optional<int> trials;
    std::optional<int> epochs;
    std::optional<double> drift_magnitude;
    std::optional<std::string> drift_feature;
    std::optional<double> trust_threshold;
    std::string drift_mode;
    std::string drift_batches;
    std::string weights;
    std::string detectors;
};

Schema schema_from_json(const json& j) {
    std::vector<FieldSpec> fields;
    for (const auto& f : j.at("fields")) {
        FieldSpec spec;
        spec.name = f.at("name").get<std::string>();
        const auto kind = f.at("kind").get<std::string>();
        if (kind == "numeric") spec.kind = FeatureKind::Numeric;
        else if (kind == "categorical") spec.kind = FeatureKind::Categorical;
        else if (kind == "label") spec.kind = FeatureKind::Label;
        else throw DataError("config: unknown field kind '" + kind + "'");
        fields.push_back(std::move(spec));
    }
    TimestampFields ts;
    if (j.contains("timestamp_fields")) {
        ts.month = j.at("timestamp_fields").value("month", ts.month);
        ts.day = j.at("timestamp_fields").value("day", ts.day);
        ts.hour = j.at("timestamp_fields").value("hour", ts.hour);
    }
    return Schema(std::move(fields), j.value("drift_target", std::string("Price_USD")), ts);
}

void apply_config_file(Options& opt, const std::string& path) {
    json j;
    try {
        j = json::parse(report::read_text_file(path));
    } catch (const json::parse_error& e) {
        throw DataError("config '" + path + "': " + e.what());
    }
    opt.rows = j.value("rows", opt.rows);
    opt.seed = j.value("seed", opt.seed);
    opt.k = j.value("k", opt.k);
    opt.out = j.value("out", opt.out);
    opt.trials = j.value("trials", opt.trials);
    if (j.contains("input")) opt.input = j.at("input").get<std::string>();
    if (j.contains("drift")) {
        const auto& d = j.at("drift");
        opt.drift.mode = synthgen::drift_mode_from_string(d.value("mode", "none"));
        opt.drift.feature = d.value("feature", opt.drift.feature);
        if (d.contains("batches")) opt.drift.batches = d.at("batches").get<std::vector<int>>();
        opt.drift.magnitude = d.value("magnitude", opt.drift.magnitude);
        opt.drift.seed = d.value("seed", opt.drift.seed);
    }
    if (j.contains("weights")) {
        const auto w = j.at("weights").get<std::vector<double>>();
        if (w.size() != 4) throw DataError("config: weights must have four entries");
        opt.pipeline.weights = trust::TrustWeights::normalized(w[0], w[1], w[2], w[3]);
    }
    opt.pipeline.trust_threshold = j.value("trust_threshold", opt.pipeline.trust_threshold);
    opt.pipeline.z_threshold = j.value("z_threshold", opt.pipeline.z_threshold);
    if (j.contains("drift_component_mode")) {
        opt.pipeline.drift_mode =
            trust::drift_component_mode_from_string(j.at("drift_component_mode").get<std::string>());
    }
    if (j.contains("calibration_batches")) {
        opt.pipeline.calibration_batches = j.at("calibration_batches").get<std::vector<int>>();
    }
    if (j.contains("train")) {
        const auto& t = j.at("train");
        for (auto* cfg : {&opt.pipeline.ae_train, &opt.pipeline.tae_train}) {
            cfg->epochs = t.value("epochs", cfg->epochs);
            cfg->batch_size = t.value("batch_size", cfg->batch_size);
            cfg->learning_rate = t.value("learning_rate", cfg->learning_rate);
            cfg->momentum = t.value("momentum", cfg->momentum);
            cfg->patience = t.value("patience", cfg->patience);
            cfg->val_fraction = t.value("val_fraction", cfg->val_fraction);
        }
    }
    if (j.contains("gbdt")) {
        const auto& g = j.at("gbdt");
        opt.pipeline.gbdt.rounds = g.value("rounds", opt.pipeline.gbdt.rounds);
        opt.pipeline.gbdt.learning_rate = g.value("learning_rate", opt.pipeline.gbdt.learning_rate);
        opt.pipeline.gbdt.max_depth = g.value("max_depth", opt.pipeline.gbdt.max_depth);
        opt.pipeline.gbdt.min_samples_leaf =
            g.value("min_samples_leaf", opt.pipeline.gbdt.min_samples_leaf);
    }
    if (j.contains("thresholds")) {
        const auto& t = j.at("thresholds");
        opt.thresholds.psi = t.value("psi", opt.thresholds.psi);
        opt.thresholds.jsd = t.value("jsd", opt.thresholds.jsd);
        opt.thresholds.z = t.value("z", opt.thresholds.z);
    }
    if (j.contains("smote_k")) opt.pipeline.smote_k = j.at("smote_k").get<int>();
    if (j.contains("schema")) opt.schema = schema_from_json(j.at("schema"));
}

void apply_overrides(Options& opt, const Overrides& ov) {
    if (ov.out) opt.out = *ov.out;
    if (ov.input) opt.input = *ov.input;
    if (ov.rows) opt.rows = *ov.rows;
    if (ov.seed) opt.seed = *ov.seed;
    if (ov.k) opt.k = *ov.k;
    if (ov.trials) opt.trials = *ov.trials;
    if (ov.epochs) {
        opt.pipeline.ae_train.epochs = *ov.epochs;
        opt.pipeline.tae_train.epochs = *ov.epochs;
    }
    if (ov.drift_magnitude) opt.drift.magnitude = *ov.drift_magnitude;
    if (ov.drift_feature) opt.drift.feature = *ov.drift_feature;
    if (ov.trust_threshold) opt.pipeline.trust_threshold = *ov.trust_threshold;
    if (!ov.drift_mode.empty()) opt.drift.mode = synthgen::drift_mode_from_string(ov.drift_mode);
    if (!ov.drift_batches.empty()) opt.drift.batches = parse_batches(ov.drift_batches);
    if (!ov.weights.empty()) {
        const auto w = parse_weights(ov.weights);
        opt.pipeline.weights = trust::TrustWeights::normalized(w[0], w[1], w[2], w[3]);
    }
    if (!ov.detectors.empty()) {
        opt.detectors.clear();
        std::string token;
        std::istringstream in(ov.detectors);
        while (std::getline(in, token, ',')) {
            opt.detectors.push_back(eval::detector_from_string(token));
        }
    }
}

json generator_meta(const synthgen::GeneratorConfig& config) {
    return json{{"format", "driftmon-dataset-meta"},
                {"version", 1},
                {"config",
                 {{"rows", config.rows},
                  {"class_priors", config.class_priors},
                  {"distance_log_mean", config.distance_log_mean},
                  {"distance_log_sd", config.distance_log_sd},
                  {"price_base", config.price_base},
                  {"price_per_mile", config.price_per_mile},
                  {"price_noise_sd", config.price_noise_sd},
                  {"cruise_miles_per_minute", config.cruise_miles_per_minute},
                  {"dirty_fraction", config.dirty_fraction},
                  {"airports", config.airports},
                  {"checkin_types", config.checkin_types},
                  {"seed", config.seed}}}};
}

int cmd_generate(const Options& opt) {
    if (opt.rows == 0) {
        std::cerr << "driftmon: rows must be positive\n";
        return 1;
    }
    synthgen::GeneratorConfig config;
    config.rows = opt.rows;
    config.seed = opt.seed;
    const auto dataset = synthgen::generate_dataset(config);
    fs::create_directories(opt.out);
    write_csv_file((fs::path(opt.out) / "flights.csv").string(), dataset);
    report::write_text_file((fs::path(opt.out) / "flights.meta.json").string(),
                            generator_meta(config).dump(2) + "\n");
    std::cout << "wrote " << dataset.records.size() << " rows to " << opt.out << "/flights.csv\n";
    return 0;
}

Dataset load_or_generate(const Options& opt) {
    if (opt.input) {
        const Schema schema = opt.schema ? *opt.schema : synthgen::airline_schema();
        return read_csv_file(*opt.input, schema);
    }
    synthgen::GeneratorConfig config;
    config.rows = opt.rows;
    config.seed = opt.seed;
    return synthgen::generate_dataset(config);
}

int cmd_run(Options opt) {
    opt.pipeline.k = opt.k;
    opt.pipeline.seed = opt.seed;
    const auto dataset = load_or_generate(opt);
    const auto run = trust::run_monitoring(dataset, opt.drift, opt.pipeline);

    fs::create_directories(opt.out);
    const json report = report::trust_report_json(run, opt.pipeline, opt.drift);
    report::write_text_file((fs::path(opt.out) / "trust_report.json").string(),
                            report.dump(2) + "\n");
    report::write_text_file((fs::path(opt.out) / "trust_report.csv").string(),
                            report::trust_report_csv(run));
    report::write_text_file((fs::path(opt.out) / "trust_over_batches.svg").string(),
                            report::svg_trust_plot(report));
    report::write_text_file((fs::path(opt.out) / "drift_metrics_over_batches.svg").string(),
                            report::svg_drift_metrics_plot(report));
    report::write_text_file((fs::path(opt.out) / "component_correlation_matrix.svg").string(),
                            report::svg_component_correlation(report));

    int flagged = 0;
    for (const auto& r : run.reports) flagged += r.drift_flag ? 1 : 0;
    std::cout << "monitored " << run.reports.size() << " batches, flagged " << flagged
              << "; reports in " << opt.out << "\n";
    return 0;
}

int cmd_bench(const Options& opt) {
    eval::BenchConfig config;
    config.generator.rows = opt.rows;
    config.pipeline = opt.pipeline;
    config.pipeline.k = opt.k;
    config.drift = opt.drift;
    config.thresholds = opt.thresholds;
    config.detectors = opt.detectors;
    config.trials = opt.trials;
    config.base_seed = opt.seed;
    if (config.drift.mode == synthgen::DriftSpec::Mode::None) {
        throw std::invalid_argument("bench needs an injected drift mode (permutation|shift)");
    }
    const auto table = eval::compare_detectors(config);

    fs::create_directories(opt.out);
    report::write_text_file((fs::path(opt.out) / "benchmark_table.json").string(),
                            report::bench_table_json(table).dump(2) + "\n");
    report::write_text_file((fs::path(opt.out) / "benchmark_table.csv").string(),
                            report::bench_table_csv(table));
    std::cout << report::bench_table_csv(table);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"driftmon: streaming concept-drift detection and trust scoring"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides ov;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--seed", ov.seed, "master seed");
        cmd->add_option("--out", ov.out, "output directory");
    };

    auto* generate = app.add_subcommand("generate", "emit a synthetic airline CSV + meta sidecar");
    add_common(generate);
    generate->add_option("--rows", ov.rows, "record count");

    auto* run = app.add_subcommand("run", "run the monitoring pipeline and write trust reports");
    add_common(run);
    run->add_option("--input", ov.input, "input CSV (defaults to generating data)");
    run->add_option("--rows", ov.rows, "rows to generate when no --input");
    run->add_option("--k", ov.k, "number of batches");
    run->add_option("--drift", ov.drift_mode, "none|permutation|shift");
    run->add_option("--drift-batches", ov.drift_batches, "e.g. 6-10 or 6,7,8");
    run->add_option("--drift-magnitude", ov.drift_magnitude, "shift mode, in std devs");
    run->add_option("--drift-feature", ov.drift_feature, "drift target feature");
    run->add_option("--weights", ov.weights, "trust weights a,b,c,d");
    run->add_option("--trust-threshold", ov.trust_threshold, "flag below this trust");
    run->add_option("--epochs", ov.epochs, "training epochs for both reconstruction models");

    auto* bench = app.add_subcommand("bench", "compare detectors over seeded trials");
    add_common(bench);
    bench->add_option("--rows", ov.rows, "rows per trial");
    bench->add_option("--k", ov.k, "number of batches");
    bench->add_option("--trials", ov.trials, "trial count");
    bench->add_option("--drift", ov.drift_mode, "permutation|shift");
    bench->add_option("--drift-batches", ov.drift_batches, "e.g. 6-10");
    bench->add_option("--drift-magnitude", ov.drift_magnitude, "shift mode, in std devs");
    bench->add_option("--trust-threshold", ov.trust_threshold, "hybrid flag threshold");
    bench->add_option("--detectors", ov.detectors,
                      "comma list of statistical|ae_only|tae_only|hybrid (default all)");

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            app.exit(e);
            return 1;
        }

        Options opt;
        if (!config_path.empty()) apply_config_file(opt, config_path);
        apply_overrides(opt, ov);

        if (generate->parsed()) return cmd_generate(opt);
        if (run->parsed()) return cmd_run(opt);
        if (bench->parsed()) return cmd_bench(opt);
        return 1;
    } catch (const DataError& e) {
        std::cerr << "driftmon: data error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "driftmon: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "driftmon: internal error: " << e.what() << "\n";
        return 3;
    }
}
