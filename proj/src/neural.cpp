#include "driftmon/neural.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "driftmon/errors.hpp"
#include "driftmon/rng.hpp"

namespace driftmon::neural {

namespace {

using RowMajorMap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstRowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

Matrix glorot_uniform(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = rng.uniform(-a, a);
        }
    }
    return m;
}

void softmax_rows_inplace(Eigen::Ref<Matrix> m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        const double mx = m.row(r).maxCoeff();
        m.row(r) = (m.row(r).array() - mx).exp();
        m.row(r) /= m.row(r).sum();
    }
}

nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json data = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            data.push_back(m(i, j));
        }
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
    const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
        throw DataError("checkpoint: matrix size mismatch");
    }
    Matrix m(rows, cols);
    std::size_t idx = 0;
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j2 = 0; j2 < cols; ++j2) {
            m(i, j2) = data[idx++].get<double>();
        }
    }
    return m;
}

BaselineStats baseline_from_errors(const Vector& errors) {
    BaselineStats b;
    const auto n = static_cast<double>(errors.size());
    b.mean = errors.mean();
    if (errors.size() > 1) {
        b.std = std::sqrt((errors.array() - b.mean).square().sum() / (n - 1.0));
    }
    return b;
}

}  // namespace

Matrix attention_weights(const Matrix& Q, const Matrix& K, int d_k) {
    if (d_k <= 0) {
        throw std::invalid_argument("attention: d_k must be positive");
    }
    if (Q.cols() != d_k || K.cols() != d_k) {
        throw std::invalid_argument("attention: Q and K must have d_k columns");
    }
    Matrix scores = Q * K.transpose() / std::sqrt(static_cast<double>(d_k));
    softmax_rows_inplace(scores);
    return scores;
}

Matrix attention(const Matrix& Q, const Matrix& K, const Matrix& V, int d_k) {
    if (K.rows() != V.rows()) {
        throw std::invalid_argument("attention: K and V must have the same row count");
    }
    return attention_weights(Q, K, d_k) * V;
}

// ---------------------------------------------------------------------------
// Dense autoencoder

Autoencoder::Autoencoder(int input_dim, std::uint64_t seed) : input_dim_(input_dim) {
    if (input_dim < 1) {
        throw std::invalid_argument("autoencoder: input_dim must be positive");
    }
    Rng rng(seed);
    const int widths[] = {input_dim, 16, 8, 16, input_dim};
    for (int l = 0; l < 4; ++l) {
        DenseLayer layer;
        layer.W = glorot_uniform(widths[l + 1], widths[l], rng);
        layer.b = Matrix::Zero(widths[l + 1], 1);
        layer.act = l == 3 ? Activation::Identity : Activation::Relu;
        layer.gW = Matrix::Zero(layer.W.rows(), layer.W.cols());
        layer.gb = Matrix::Zero(layer.b.rows(), 1);
        layers_.push_back(std::move(layer));
    }
}

Matrix Autoencoder::reconstruct(const Matrix& X) const {
    if (X.cols() != input_dim_) {
        throw std::invalid_argument("autoencoder: input width " + std::to_string(X.cols()) +
                                    " does not match model dimension " + std::to_string(input_dim_));
    }
    Matrix a = X;
    for (const auto& layer : layers_) {
        Matrix z = (a * layer.W.transpose()).rowwise() + layer.b.col(0).transpose();
        a = layer.act == Activation::Relu ? z.cwiseMax(0.0) : std::move(z);
    }
    return a;
}

double Autoencoder::loss(const Matrix& input, const Matrix& target) const {
    return (target - reconstruct(input)).squaredNorm() / static_cast<double>(input.rows());
}

void Autoencoder::zero_grads() {
    for (auto& layer : layers_) {
        layer.gW.setZero();
        layer.gb.setZero();
    }
}

double Autoencoder::backward(const Matrix& input, const Matrix& target) {
    const auto n = static_cast<double>(input.rows());
    std::vector<Matrix> acts;  // activations, acts[0] = input
    acts.reserve(layers_.size() + 1);
    std::vector<Matrix> zs;
    acts.push_back(input);
    for (const auto& layer : layers_) {
        Matrix z = (acts.back() * layer.W.transpose()).rowwise() + layer.b.col(0).transpose();
        acts.push_back(layer.act == Activation::Relu ? z.cwiseMax(0.0) : z);
        zs.push_back(std::move(z));
    }

    const Matrix& xhat = acts.back();
    const double loss_value = (target - xhat).squaredNorm() / n;

    Matrix delta = 2.0 / n * (xhat - target);  // dL/d(output)
    for (int l = static_cast<int>(layers_.size()) - 1; l >= 0; --l) {
        auto& layer = layers_[static_cast<std::size_t>(l)];
        if (layer.act == Activation::Relu) {
            delta = delta.cwiseProduct((zs[static_cast<std::size_t>(l)].array() > 0.0).cast<double>().matrix());
        }
        layer.gW += delta.transpose() * acts[static_cast<std::size_t>(l)];
        layer.gb += delta.colwise().sum().transpose();
        if (l > 0) {
            delta = delta * layer.W;
        }
    }
    return loss_value;
}

std::vector<ParamRef> Autoencoder::params() {
    std::vector<ParamRef> refs;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        refs.push_back({"layer" + std::to_string(l) + ".W", &layers_[l].W, &layers_[l].gW});
        refs.push_back({"layer" + std::to_string(l) + ".b", &layers_[l].b, &layers_[l].gb});
    }
    return refs;
}

std::string Autoencoder::save_json() const {
    nlohmann::json j;
    j["format"] = "driftmon-checkpoint";
    j["version"] = 1;
    j["kind"] = "autoencoder";
    j["input_dim"] = input_dim_;
    j["baseline"] = {{"mean", baseline_.mean}, {"std", baseline_.std}};
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& layer : layers_) {
        nlohmann::json lj;
        lj["activation"] = layer.act == Activation::Relu ? "relu" : "identity";
        lj["W"] = matrix_to_json(layer.W);
        lj["b"] = matrix_to_json(layer.b);
        layers.push_back(std::move(lj));
    }
    j["layers"] = std::move(layers);
    return j.dump(2);
}

Autoencoder Autoencoder::load_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("format", "") != "driftmon-checkpoint" || j.value("kind", "") != "autoencoder") {
        throw DataError("checkpoint: not an autoencoder checkpoint");
    }
    if (j.value("version", 0) != 1) {
        throw DataError("checkpoint: unsupported version");
    }
    Autoencoder model(j.at("input_dim").get<int>(), 0);
    const auto& layers = j.at("layers");
    if (layers.size() != model.layers_.size()) {
        throw DataError("checkpoint: unexpected layer count");
    }
    for (std::size_t l = 0; l < model.layers_.size(); ++l) {
        auto& layer = model.layers_[l];
        layer.W = matrix_from_json(layers[l].at("W"));
        layer.b = matrix_from_json(layers[l].at("b"));
        layer.act = layers[l].at("activation").get<std::string>() == "relu" ? Activation::Relu
                                                                            : Activation::Identity;
        layer.gW = Matrix::Zero(layer.W.rows(), layer.W.cols());
        layer.gb = Matrix::Zero(layer.b.rows(), 1);
    }
    model.baseline_.mean = j.at("baseline").at("mean").get<double>();
    model.baseline_.std = j.at("baseline").at("std").get<double>();
    return model;
}

// ---------------------------------------------------------------------------
// Transformer autoencoder

struct TransformerAutoencoder::Cache {
    Matrix T, Q, K, V;  // (B*d) x d_model
    Matrix attn;        // (B*d) x d, per-sample row-stochastic blocks
    Matrix H1, Z1, R, H2;
    Matrix Xhat;        // B x d
};

TransformerAutoencoder::TransformerAutoencoder(int input_dim, int d_model, int ff_hidden,
                                               std::uint64_t seed)
    : input_dim_(input_dim), d_model_(d_model), ff_hidden_(ff_hidden) {
    if (input_dim < 1 || d_model < 1 || ff_hidden < 1) {
        throw std::invalid_argument("transformer_ae: dimensions must be positive");
    }
    Rng rng(seed);
    embed_ = glorot_uniform(input_dim, d_model, rng);
    pos_ = glorot_uniform(input_dim, d_model, rng);
    wq_ = glorot_uniform(d_model, d_model, rng);
    wk_ = glorot_uniform(d_model, d_model, rng);
    wv_ = glorot_uniform(d_model, d_model, rng);
    ff1_w_ = glorot_uniform(d_model, ff_hidden, rng);
    ff1_b_ = Matrix::Zero(ff_hidden, 1);
    ff2_w_ = glorot_uniform(ff_hidden, d_model, rng);
    ff2_b_ = Matrix::Zero(d_model, 1);
    out_w_ = glorot_uniform(d_model, 1, rng);
    out_b_ = Matrix::Zero(input_dim, 1);

    for (auto ref : params()) {
        *ref.grad = Matrix::Zero(ref.value->rows(), ref.value->cols());
    }
}

void TransformerAutoencoder::forward(const Matrix& X, Cache& c) const {
    if (X.cols() != input_dim_) {
        throw std::invalid_argument("transformer_ae: input width " + std::to_string(X.cols()) +
                                    " does not match model dimension " + std::to_string(input_dim_));
    }
    const Eigen::Index B = X.rows();
    const Eigen::Index d = input_dim_;
    const Eigen::Index dm = d_model_;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dm));

    c.T.resize(B * d, dm);
    for (Eigen::Index i = 0; i < B; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            c.T.row(i * d + j) = X(i, j) * embed_.row(j) + pos_.row(j);
        }
    }
    c.Q.noalias() = c.T * wq_;
    c.K.noalias() = c.T * wk_;
    c.V.noalias() = c.T * wv_;

    c.attn.resize(B * d, d);
    Matrix A(B * d, dm);
    Matrix S(d, d);
    for (Eigen::Index i = 0; i < B; ++i) {
        auto Qi = c.Q.middleRows(i * d, d);
        auto Ki = c.K.middleRows(i * d, d);
        auto Vi = c.V.middleRows(i * d, d);
        S.noalias() = Qi * Ki.transpose() * scale;
        softmax_rows_inplace(S);
        c.attn.middleRows(i * d, d) = S;
        A.middleRows(i * d, d).noalias() = S * Vi;
    }

    c.H1 = c.T + A;
    c.Z1 = (c.H1 * ff1_w_).rowwise() + ff1_b_.col(0).transpose();
    c.R = c.Z1.cwiseMax(0.0);
    c.H2 = c.H1 + ((c.R * ff2_w_).rowwise() + ff2_b_.col(0).transpose());

    Matrix out_flat = c.H2 * out_w_;  // (B*d) x 1
    c.Xhat = ConstRowMajorMap(out_flat.data(), B, d);
    c.Xhat.rowwise() += out_b_.col(0).transpose();
}

Matrix TransformerAutoencoder::reconstruct(const Matrix& X) const {
    Cache c;
    forward(X, c);
    return c.Xhat;
}

Matrix TransformerAutoencoder::attention_matrix(const Vector& x) const {
    Cache c;
    forward(x.transpose(), c);
    return c.attn;
}

double TransformerAutoencoder::loss(const Matrix& input, const Matrix& target) const {
    Cache c;
    forward(input, c);
    return (target - c.Xhat).squaredNorm() / static_cast<double>(input.rows());
}

void TransformerAutoencoder::zero_grads() {
    for (auto ref : params()) ref.grad->setZero();
}

double TransformerAutoencoder::backward(const Matrix& input, const Matrix& target) {
    Cache c;
    forward(input, c);
    const Eigen::Index B = input.rows();
    const Eigen::Index d = input_dim_;
    const Eigen::Index dm = d_model_;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dm));
    const double loss_value = (target - c.Xhat).squaredNorm() / static_cast<double>(B);

    Matrix dXhat = 2.0 / static_cast<double>(B) * (c.Xhat - target);  // B x d
    g_out_b_ += dXhat.colwise().sum().transpose();

    // Flatten dXhat to token order (row-major): entry (i, j) -> row i*d + j.
    Matrix s(B * d, 1);
    RowMajorMap(s.data(), B, d) = dXhat;

    g_out_w_.noalias() += c.H2.transpose() * s;
    Matrix dH2 = s * out_w_.transpose();  // (B*d) x dm

    // Feed-forward block (residual: dH1 collects both paths).
    g_ff2_b_ += dH2.colwise().sum().transpose();
    g_ff2_w_.noalias() += c.R.transpose() * dH2;
    Matrix dR = dH2 * ff2_w_.transpose();
    Matrix dZ1 = dR.cwiseProduct((c.Z1.array() > 0.0).cast<double>().matrix());
    g_ff1_b_ += dZ1.colwise().sum().transpose();
    g_ff1_w_.noalias() += c.H1.transpose() * dZ1;
    Matrix dH1 = dH2 + dZ1 * ff1_w_.transpose();

    // Attention block (residual again: dT starts from dH1).
    Matrix dT = dH1;
    Matrix dQ(B * d, dm), dK(B * d, dm), dV(B * d, dm);
    Matrix dWi(d, d), dSi(d, d);
    for (Eigen::Index i = 0; i < B; ++i) {
        auto Wi = c.attn.middleRows(i * d, d);
        auto dAi = dH1.middleRows(i * d, d);
        auto Qi = c.Q.middleRows(i * d, d);
        auto Ki = c.K.middleRows(i * d, d);
        auto Vi = c.V.middleRows(i * d, d);

        dWi.noalias() = dAi * Vi.transpose();  // d x d
        dV.middleRows(i * d, d).noalias() = Wi.transpose() * dAi;

        for (Eigen::Index r = 0; r < d; ++r) {
            const double inner = dWi.row(r).dot(Wi.row(r));
            dSi.row(r) = (dWi.row(r).array() - inner) * Wi.row(r).array();
        }
        dQ.middleRows(i * d, d).noalias() = dSi * Ki * scale;
        dK.middleRows(i * d, d).noalias() = dSi.transpose() * Qi * scale;
    }

    g_wq_.noalias() += c.T.transpose() * dQ;
    g_wk_.noalias() += c.T.transpose() * dK;
    g_wv_.noalias() += c.T.transpose() * dV;
    dT.noalias() += dQ * wq_.transpose();
    dT.noalias() += dK * wk_.transpose();
    dT.noalias() += dV * wv_.transpose();

    for (Eigen::Index i = 0; i < B; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            g_pos_.row(j) += dT.row(i * d + j);
            g_embed_.row(j) += input(i, j) * dT.row(i * d + j);
        }
    }
    return loss_value;
}

std::vector<ParamRef> TransformerAutoencoder::params() {
    return {
        {"embed", &embed_, &g_embed_},   {"pos", &pos_, &g_pos_},
        {"wq", &wq_, &g_wq_},            {"wk", &wk_, &g_wk_},
        {"wv", &wv_, &g_wv_},            {"ff1_w", &ff1_w_, &g_ff1_w_},
        {"ff1_b", &ff1_b_, &g_ff1_b_},   {"ff2_w", &ff2_w_, &g_ff2_w_},
        {"ff2_b", &ff2_b_, &g_ff2_b_},   {"out_w", &out_w_, &g_out_w_},
        {"out_b", &out_b_, &g_out_b_},
    };
}

std::string TransformerAutoencoder::save_json() const {
    nlohmann::json j;
    j["format"] = "driftmon-checkpoint";
    j["version"] = 1;
    j["kind"] = "transformer_autoencoder";
    j["input_dim"] = input_dim_;
    j["d_model"] = d_model_;
    j["ff_hidden"] = ff_hidden_;
    j["baseline"] = {{"mean", baseline_.mean}, {"std", baseline_.std}};
    nlohmann::json params_json;
    for (auto ref : const_cast<TransformerAutoencoder*>(this)->params()) {
        params_json[ref.name] = matrix_to_json(*ref.value);
    }
    j["params"] = std::move(params_json);
    return j.dump(2);
}

TransformerAutoencoder TransformerAutoencoder::load_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("format", "") != "driftmon-checkpoint" ||
        j.value("kind", "") != "transformer_autoencoder") {
        throw DataError("checkpoint: not a transformer autoencoder checkpoint");
    }
    if (j.value("version", 0) != 1) {
        throw DataError("checkpoint: unsupported version");
    }
    TransformerAutoencoder model(j.at("input_dim").get<int>(), j.at("d_model").get<int>(),
                                 j.at("ff_hidden").get<int>(), 0);
    const auto& params_json = j.at("params");
    for (auto ref : model.params()) {
        Matrix m = matrix_from_json(params_json.at(ref.name));
        if (m.rows() != ref.value->rows() || m.cols() != ref.value->cols()) {
            throw DataError("checkpoint: shape mismatch for " + ref.name);
        }
        *ref.value = std::move(m);
    }
    model.baseline_.mean = j.at("baseline").at("mean").get<double>();
    model.baseline_.std = j.at("baseline").at("std").get<double>();
    return model;
}

// ---------------------------------------------------------------------------
// Training

namespace {

bool corrupting(const TrainConfig& cfg) { return cfg.noise_std > 0.0 || cfg.mask_prob > 0.0; }

void corrupt_inplace(Matrix& m, const TrainConfig& cfg, Rng& rng) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (cfg.mask_prob > 0.0 && rng.uniform() < cfg.mask_prob) m(i, j) = 0.0;
            if (cfg.noise_std > 0.0) m(i, j) += cfg.noise_std * rng.normal();
        }
    }
}

template <typename Model>
Model train_model(const Matrix& X, const TrainConfig& cfg, const std::string& component) {
    if (X.rows() < 32) {
        throw std::invalid_argument(component + ": need at least 32 training rows, got " +
                                    std::to_string(X.rows()));
    }
    if (cfg.epochs < 1 || cfg.batch_size < 1 || cfg.learning_rate <= 0.0) {
        throw std::invalid_argument(component + ": epochs, batch size, and learning rate must be positive");
    }
    if (cfg.mask_prob < 0.0 || cfg.mask_prob >= 1.0 || cfg.noise_std < 0.0) {
        throw std::invalid_argument(component + ": mask_prob must be in [0,1) and noise_std >= 0");
    }

    Rng rng(derive_seed(cfg.seed, component));
    Model model(static_cast<int>(X.cols()), derive_seed(cfg.seed, component + ".init"));

    std::vector<Eigen::Index> order(static_cast<std::size_t>(X.rows()));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    const auto n_val = static_cast<std::size_t>(cfg.val_fraction * static_cast<double>(order.size()));
    std::vector<Eigen::Index> train_idx(order.begin(), order.end() - static_cast<long>(n_val));
    Matrix val(static_cast<Eigen::Index>(n_val), X.cols());
    for (std::size_t i = 0; i < n_val; ++i) {
        val.row(static_cast<Eigen::Index>(i)) = X.row(order[train_idx.size() + i]);
    }
    const bool use_val = n_val >= 1 && cfg.patience > 0;

    // Early stopping watches the training objective on held-out rows, so the
    // corruption is applied once, up front, for a stable metric.
    Matrix val_input = val;
    if (use_val && corrupting(cfg)) corrupt_inplace(val_input, cfg, rng);

    // The recorded loss curve is clean reconstruction loss on a fixed subset
    // of training rows; it tracks progress independent of the corruption.
    const auto n_eval = std::min<std::size_t>(train_idx.size(), 2048);
    Matrix eval_subset(static_cast<Eigen::Index>(n_eval), X.cols());
    for (std::size_t i = 0; i < n_eval; ++i) {
        eval_subset.row(static_cast<Eigen::Index>(i)) = X.row(train_idx[i]);
    }

    auto refs = model.params();
    std::vector<Matrix> velocity;
    velocity.reserve(refs.size());
    for (auto& ref : refs) velocity.push_back(Matrix::Zero(ref.value->rows(), ref.value->cols()));

    std::vector<Matrix> best_params;
    double best_val = std::numeric_limits<double>::infinity();
    int epochs_since_best = 0;

    Matrix minibatch(std::min<Eigen::Index>(cfg.batch_size, static_cast<Eigen::Index>(train_idx.size())),
                     X.cols());
    Matrix corrupted = minibatch;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(train_idx);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < train_idx.size(); start += cfg.batch_size) {
            const auto count = std::min<std::size_t>(cfg.batch_size, train_idx.size() - start);
            minibatch.resize(static_cast<Eigen::Index>(count), X.cols());
            for (std::size_t i = 0; i < count; ++i) {
                minibatch.row(static_cast<Eigen::Index>(i)) = X.row(train_idx[start + i]);
            }
            model.zero_grads();
            double batch_loss;
            if (corrupting(cfg)) {
                corrupted = minibatch;
                corrupt_inplace(corrupted, cfg, rng);
                batch_loss = model.backward(corrupted, minibatch);
            } else {
                batch_loss = model.backward(minibatch);
            }
            epoch_loss += batch_loss * static_cast<double>(count);
            for (std::size_t p = 0; p < refs.size(); ++p) {
                velocity[p] = cfg.momentum * velocity[p] + *refs[p].grad;
                *refs[p].value -= cfg.learning_rate * velocity[p];
            }
        }
        epoch_loss /= static_cast<double>(train_idx.size());
        if (!std::isfinite(epoch_loss)) {
            throw DataError(component + ": training diverged (non-finite loss at epoch " +
                            std::to_string(epoch + 1) + "); lower the learning rate");
        }
        model.loss_curve().push_back(model.loss(eval_subset));

        if (use_val) {
            const double val_loss = model.loss(val_input, val);
            if (val_loss < best_val * (1.0 - 1e-4)) {
                best_val = val_loss;
                epochs_since_best = 0;
                best_params.clear();
                for (auto& ref : refs) best_params.push_back(*ref.value);
            } else if (++epochs_since_best >= cfg.patience) {
                break;
            }
        }
    }
    if (!best_params.empty()) {
        for (std::size_t p = 0; p < refs.size(); ++p) *refs[p].value = best_params[p];
    }

    const auto errors = reconstruction_error(model, X);
    model.set_baseline(baseline_from_errors(errors.per_sample));
    return model;
}

Vector per_sample_errors(const Matrix& X, const Matrix& Xhat) {
    return (X - Xhat).rowwise().squaredNorm();
}

}  // namespace

Autoencoder train_autoencoder(const Matrix& X, const TrainConfig& cfg) {
    return train_model<Autoencoder>(X, cfg, "autoencoder");
}

TransformerAutoencoder train_transformer_ae(const Matrix& X, const TrainConfig& cfg) {
    return train_model<TransformerAutoencoder>(X, cfg, "transformer_ae");
}

ReconstructionError reconstruction_error(const Autoencoder& model, const Matrix& X) {
    ReconstructionError e;
    e.per_sample = per_sample_errors(X, model.reconstruct(X));
    e.mean = e.per_sample.size() > 0 ? e.per_sample.mean() : 0.0;
    return e;
}

ReconstructionError reconstruction_error(const TransformerAutoencoder& model, const Matrix& X) {
    ReconstructionError e;
    e.per_sample = per_sample_errors(X, model.reconstruct(X));
    e.mean = e.per_sample.size() > 0 ? e.per_sample.mean() : 0.0;
    return e;
}

DriftDelta drift_delta_from(const BaselineStats& baseline, double batch_mean_error) {
    DriftDelta d;
    d.delta = batch_mean_error - baseline.mean;
    if (baseline.std > 0.0) {
        d.z = d.delta / baseline.std;
    } else {
        d.z = d.delta > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return d;
}

DriftDelta drift_delta(const Autoencoder& model, const Matrix& batch_X) {
    return drift_delta_from(model.baseline(), reconstruction_error(model, batch_X).mean);
}

DriftDelta drift_delta(const TransformerAutoencoder& model, const Matrix& batch_X) {
    return drift_delta_from(model.baseline(), reconstruction_error(model, batch_X).mean);
}

}  // namespace driftmon::neural
