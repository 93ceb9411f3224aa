#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "driftmon/classifier.hpp"
#include "driftmon/csv.hpp"
#include "driftmon/eval.hpp"
#include "driftmon/neural.hpp"
#include "driftmon/preprocess.hpp"
#include "driftmon/report_io.hpp"
#include "driftmon/stat_drift.hpp"
#include "driftmon/synthgen.hpp"
#include "driftmon/trust.hpp"

namespace py = pybind11;
using namespace driftmon;

namespace {

py::dict report_to_dict(const trust::TrustReport& r) {
    py::dict d;
    d["batch"] = r.signals.batch_index;
    d["psi"] = r.signals.psi;
    d["jsd"] = r.signals.jsd;
    d["ae_delta"] = r.signals.ae_delta;
    d["ae_z"] = r.signals.ae_z;
    d["tae_delta"] = r.signals.tae_delta;
    d["tae_z"] = r.signals.tae_z;
    d["uncertainty"] = r.signals.uncertainty;
    d["rule_violation_rate"] = r.signals.rule_violation;
    d["accuracy"] = r.signals.accuracy;
    d["error_rate"] = r.signals.error_rate;
    d["d_hat"] = r.components.drift;
    d["u_hat"] = r.components.uncertainty;
    d["r_hat"] = r.components.rule;
    d["e_hat"] = r.components.error;
    d["trust"] = r.trust;
    d["drift_flag"] = r.drift_flag;
    return d;
}

synthgen::DriftSpec drift_spec_from(const std::string& mode, const std::string& feature,
                                    const std::vector<int>& batches, double magnitude,
                                    std::uint64_t seed) {
    synthgen::DriftSpec spec;
    spec.mode = synthgen::drift_mode_from_string(mode);
    spec.feature = feature;
    spec.batches = batches;
    spec.magnitude = magnitude;
    spec.seed = seed;
    return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Concept-drift detection and trust scoring engine";

    py::class_<Dataset>(m, "Dataset")
        .def_property_readonly("num_records",
                               [](const Dataset& d) { return d.records.size(); })
        .def_property_readonly("field_names",
                               [](const Dataset& d) {
                                   std::vector<std::string> names;
                                   for (const auto& f : d.schema.fields()) names.push_back(f.name);
                                   return names;
                               })
        .def("column",
             [](const Dataset& d, const std::string& name) {
                 const std::size_t idx = d.schema.require_index(name);
                 py::list out;
                 for (const auto& rec : d.records) {
                     const Value& v = rec.values[idx];
                     if (is_number(v)) out.append(as_number(v));
                     else if (is_text(v)) out.append(as_text(v));
                     else out.append(py::none());
                 }
                 return out;
             },
             py::arg("name"))
        .def("to_csv", [](const Dataset& d) {
            std::ostringstream out;
            write_csv(out, d);
            return out.str();
        });

    m.def(
        "generate_dataset",
        [](std::size_t rows, std::uint64_t seed, const std::vector<double>& priors) {
            synthgen::GeneratorConfig config;
            config.rows = rows;
            config.seed = seed;
            if (!priors.empty()) {
                if (priors.size() != 3) {
                    throw std::invalid_argument("class_priors must have three entries");
                }
                std::copy(priors.begin(), priors.end(), config.class_priors.begin());
            }
            return synthgen::generate_dataset(config);
        },
        py::arg("rows") = 20000, py::arg("seed") = 42,
        py::arg("class_priors") = std::vector<double>{},
        "Seeded synthetic airline-style dataset");

    // Statistical drift metrics.
    m.def(
        "build_histogram",
        [](const std::vector<double>& values, std::size_t bins, const std::string& strategy,
           double epsilon) {
            statdrift::BinningSpec spec;
            spec.bins = bins;
            spec.epsilon = epsilon;
            spec.strategy = strategy == "equal_width"
                                ? statdrift::BinningSpec::Strategy::EqualWidth
                                : statdrift::BinningSpec::Strategy::ReferenceQuantile;
            const auto h = statdrift::build_histogram(values, spec);
            return py::make_tuple(h.edges, h.proportions);
        },
        py::arg("values"), py::arg("bins") = 10, py::arg("strategy") = "quantile",
        py::arg("epsilon") = 1e-6);
    m.def("psi",
          [](const std::vector<double>& expected, const std::vector<double>& actual) {
              statdrift::Histogram e{{}, expected};
              statdrift::Histogram a{{}, actual};
              return statdrift::psi(e, a);
          },
          py::arg("expected"), py::arg("actual"),
          "PSI over aligned, smoothed bin proportions");
    m.def("kl_divergence", &statdrift::kl_divergence, py::arg("p"), py::arg("q"));
    m.def("jsd",
          py::overload_cast<const std::vector<double>&, const std::vector<double>&>(&statdrift::jsd),
          py::arg("p"), py::arg("q"));

    // Attention and reconstruction models.
    m.def("attention", &neural::attention, py::arg("Q"), py::arg("K"), py::arg("V"),
          py::arg("d_k"), "softmax(Q K^T / sqrt(d_k)) V");

    py::class_<neural::Autoencoder>(m, "Autoencoder")
        .def_property_readonly("input_dim", &neural::Autoencoder::input_dim)
        .def("reconstruct", &neural::Autoencoder::reconstruct)
        .def("sample_errors",
             [](const neural::Autoencoder& model, const neural::Matrix& X) {
                 return neural::reconstruction_error(model, X).per_sample;
             })
        .def("mean_error",
             [](const neural::Autoencoder& model, const neural::Matrix& X) {
                 return neural::reconstruction_error(model, X).mean;
             })
        .def("drift_delta",
             [](const neural::Autoencoder& model, const neural::Matrix& X) {
                 const auto d = neural::drift_delta(model, X);
                 return py::make_tuple(d.delta, d.z);
             })
        .def_property_readonly("loss_curve",
                               [](const neural::Autoencoder& m2) { return m2.loss_curve(); })
        .def("save_json", &neural::Autoencoder::save_json)
        .def_static("load_json", &neural::Autoencoder::load_json);

    py::class_<neural::TransformerAutoencoder>(m, "TransformerAutoencoder")
        .def_property_readonly("input_dim", &neural::TransformerAutoencoder::input_dim)
        .def("reconstruct", &neural::TransformerAutoencoder::reconstruct)
        .def("sample_errors",
             [](const neural::TransformerAutoencoder& model, const neural::Matrix& X) {
                 return neural::reconstruction_error(model, X).per_sample;
             })
        .def("mean_error",
             [](const neural::TransformerAutoencoder& model, const neural::Matrix& X) {
                 return neural::reconstruction_error(model, X).mean;
             })
        .def("drift_delta",
             [](const neural::TransformerAutoencoder& model, const neural::Matrix& X) {
                 const auto d = neural::drift_delta(model, X);
                 return py::make_tuple(d.delta, d.z);
             })
        .def("attention_matrix", &neural::TransformerAutoencoder::attention_matrix)
        .def_property_readonly(
            "loss_curve", [](const neural::TransformerAutoencoder& m2) { return m2.loss_curve(); })
        .def("save_json", &neural::TransformerAutoencoder::save_json)
        .def_static("load_json", &neural::TransformerAutoencoder::load_json);

    const auto make_train_config = [](int epochs, int batch_size, double learning_rate,
                                      std::uint64_t seed, int patience, double noise_std,
                                      double mask_prob) {
        neural::TrainConfig cfg;
        cfg.epochs = epochs;
        cfg.batch_size = batch_size;
        cfg.learning_rate = learning_rate;
        cfg.seed = seed;
        cfg.patience = patience;
        cfg.noise_std = noise_std;
        cfg.mask_prob = mask_prob;
        return cfg;
    };
    const neural::TrainConfig defaults;
    m.def(
        "train_autoencoder",
        [make_train_config](const neural::Matrix& X, int epochs, int batch_size,
                            double learning_rate, std::uint64_t seed, int patience,
                            double noise_std, double mask_prob) {
            return neural::train_autoencoder(
                X, make_train_config(epochs, batch_size, learning_rate, seed, patience, noise_std,
                                     mask_prob));
        },
        py::arg("X"), py::arg("epochs") = 200, py::arg("batch_size") = 64,
        py::arg("learning_rate") = 1e-3, py::arg("seed") = 0, py::arg("patience") = 20,
        py::arg("noise_std") = defaults.noise_std, py::arg("mask_prob") = defaults.mask_prob);
    m.def(
        "train_transformer_ae",
        [make_train_config](const neural::Matrix& X, int epochs, int batch_size,
                            double learning_rate, std::uint64_t seed, int patience,
                            double noise_std, double mask_prob) {
            return neural::train_transformer_ae(
                X, make_train_config(epochs, batch_size, learning_rate, seed, patience, noise_std,
                                     mask_prob));
        },
        py::arg("X"), py::arg("epochs") = 200, py::arg("batch_size") = 64,
        py::arg("learning_rate") = 1e-3, py::arg("seed") = 0, py::arg("patience") = 20,
        py::arg("noise_std") = defaults.noise_std, py::arg("mask_prob") = defaults.mask_prob);

    // Classifier.
    py::class_<classifier::GBDTModel>(m, "GBDTModel")
        .def_property_readonly("classes", &classifier::GBDTModel::classes)
        .def("predict_proba",
             [](const classifier::GBDTModel& model, const Eigen::RowVectorXd& row) {
                 return classifier::predict_proba(model, row);
             })
        .def("batch_uncertainty",
             [](const classifier::GBDTModel& model, const classifier::Matrix& X) {
                 return classifier::batch_uncertainty(model, X);
             })
        .def("batch_error",
             [](const classifier::GBDTModel& model, const classifier::Matrix& X,
                const std::vector<int>& y) { return classifier::batch_error(model, X, y); })
        .def("save_json", &classifier::GBDTModel::save_json)
        .def_static("load_json", &classifier::GBDTModel::load_json);
    m.def(
        "fit_gbdt",
        [](const classifier::Matrix& X, const std::vector<int>& y,
           const std::vector<std::string>& classes, int rounds, double learning_rate,
           int max_depth) {
            classifier::GBDTConfig config;
            config.rounds = rounds;
            config.learning_rate = learning_rate;
            config.max_depth = max_depth;
            return classifier::fit(X, y, classes, config);
        },
        py::arg("X"), py::arg("y"), py::arg("classes"), py::arg("rounds") = 100,
        py::arg("learning_rate") = 0.1, py::arg("max_depth") = 4);
    m.def("softmax_margin", &classifier::softmax_margin, py::arg("p"));

    m.def(
        "smote_resample",
        [](const preprocess::Matrix& X, const std::vector<int>& y, int k_neighbors,
           std::uint64_t seed) {
            const auto result = preprocess::smote_resample(X, y, k_neighbors, seed);
            return py::make_tuple(result.X, result.y, result.parents);
        },
        py::arg("X"), py::arg("y"), py::arg("k_neighbors") = 5, py::arg("seed") = 0);

    m.def("trust_score",
          [](double d, double u, double r, double e, double alpha, double beta, double gamma,
             double delta) {
              return trust::trust_score({d, u, r, e},
                                        trust::TrustWeights::normalized(alpha, beta, gamma, delta));
          },
          py::arg("drift"), py::arg("uncertainty"), py::arg("rule"), py::arg("error"),
          py::arg("alpha") = 0.25, py::arg("beta") = 0.25, py::arg("gamma") = 0.25,
          py::arg("delta") = 0.25);

    m.def(
        "run_monitoring",
        [](const Dataset& dataset, const std::string& drift_mode, const std::vector<int>& batches,
           double magnitude, std::size_t k, std::uint64_t seed, int epochs,
           double trust_threshold) {
            trust::PipelineConfig config;
            config.k = k;
            config.seed = seed;
            config.trust_threshold = trust_threshold;
            config.ae_train.epochs = epochs;
            config.tae_train.epochs = epochs;
            const auto spec = drift_spec_from(drift_mode, "Price_USD", batches, magnitude, 0);
            const auto run = trust::run_monitoring(dataset, spec, config);
            py::list reports;
            for (const auto& r : run.reports) reports.append(report_to_dict(r));
            return reports;
        },
        py::arg("dataset"), py::arg("drift_mode") = "none",
        py::arg("drift_batches") = std::vector<int>{6, 7, 8, 9, 10}, py::arg("magnitude") = 2.0,
        py::arg("k") = 10, py::arg("seed") = 42, py::arg("epochs") = 200,
        py::arg("trust_threshold") = 0.7,
        "Full pipeline; returns one dict per batch");
}
