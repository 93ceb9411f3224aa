#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace driftmon::neural {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Activation { Relu, Identity };

struct TrainConfig {
    int epochs = 200;
    int batch_size = 64;
    double learning_rate = 1e-3;
    double momentum = 0.9;
    std::uint64_t seed = 0;
    int patience = 20;          // early stop on a validation holdout
    double val_fraction = 0.10;
    // Input corruption during training (targets stay clean). Without it the
    // residual paths settle on an identity map that reconstructs relationally
    // drifted rows as well as clean ones. Cells are zeroed (z-space mean)
    // with probability mask_prob, then Gaussian noise is added.
    double noise_std = 0.0;
    double mask_prob = 0.25;
};

struct BaselineStats {
    double mean = 0.0;
    double std = 0.0;
};

// Named view of one parameter tensor and its gradient accumulator. Vectors
// are stored as n x 1 matrices so gradient checking can treat everything
// uniformly.
struct ParamRef {
    std::string name;
    Matrix* value;
    Matrix* grad;
};

// softmax(Q K^T / sqrt(d_k)) V with row-wise softmax. Q and K must have d_k
// columns; K and V the same row count.
Matrix attention(const Matrix& Q, const Matrix& K, const Matrix& V, int d_k);

// Row-wise softmax of Q K^T / sqrt(d_k); every row sums to 1.
Matrix attention_weights(const Matrix& Q, const Matrix& K, int d_k);

struct DenseLayer {
    Matrix W;   // out x in
    Matrix b;   // out x 1
    Activation act = Activation::Relu;

    Matrix gW;
    Matrix gb;
};

// Dense autoencoder d -> 16 -> 8 -> 16 -> d (relu throughout, identity
// output). Baseline error stats are frozen once training finishes.
class Autoencoder {
public:
    Autoencoder(int input_dim, std::uint64_t seed);

    int input_dim() const { return input_dim_; }

    Matrix reconstruct(const Matrix& X) const;

    // Mean over rows of the per-sample squared-L2 reconstruction error.
    double loss(const Matrix& X) const { return loss(X, X); }
    double loss(const Matrix& input, const Matrix& target) const;
    void zero_grads();
    // Accumulates d(loss)/d(param) for loss(X); returns the loss.
    double backward(const Matrix& X) { return backward(X, X); }
    // Denoising form: reconstruct `target` from `input`.
    double backward(const Matrix& input, const Matrix& target);
    std::vector<ParamRef> params();

    const BaselineStats& baseline() const { return baseline_; }
    void set_baseline(const BaselineStats& b) { baseline_ = b; }

    const std::vector<double>& loss_curve() const { return loss_curve_; }
    std::vector<double>& loss_curve() { return loss_curve_; }

    std::string save_json() const;
    static Autoencoder load_json(const std::string& text);

    const std::vector<DenseLayer>& layers() const { return layers_; }
    std::vector<DenseLayer>& layers() { return layers_; }

private:
    int input_dim_;
    std::vector<DenseLayer> layers_;
    BaselineStats baseline_;
    std::vector<double> loss_curve_;
};

// Autoencoder whose encoder runs single-head scaled dot-product attention
// across per-feature tokens: each scalar input is embedded to d_model, added
// to a learned per-feature position encoding, passed through one attention
// block and a feed-forward block (both with residual connections), then
// projected back to one scalar per feature.
class TransformerAutoencoder {
public:
    TransformerAutoencoder(int input_dim, int d_model, int ff_hidden, std::uint64_t seed);
    TransformerAutoencoder(int input_dim, std::uint64_t seed)
        : TransformerAutoencoder(input_dim, 16, 32, seed) {}

    int input_dim() const { return input_dim_; }
    int d_model() const { return d_model_; }

    Matrix reconstruct(const Matrix& X) const;
    // Row-stochastic attention weights for one input row (d x d).
    Matrix attention_matrix(const Vector& x) const;

    double loss(const Matrix& X) const { return loss(X, X); }
    double loss(const Matrix& input, const Matrix& target) const;
    void zero_grads();
    double backward(const Matrix& X) { return backward(X, X); }
    double backward(const Matrix& input, const Matrix& target);
    std::vector<ParamRef> params();

    const BaselineStats& baseline() const { return baseline_; }
    void set_baseline(const BaselineStats& b) { baseline_ = b; }

    const std::vector<double>& loss_curve() const { return loss_curve_; }
    std::vector<double>& loss_curve() { return loss_curve_; }

    std::string save_json() const;
    static TransformerAutoencoder load_json(const std::string& text);

private:
    struct Cache;
    void forward(const Matrix& X, Cache& cache) const;

    int input_dim_;
    int d_model_;
    int ff_hidden_;

    Matrix embed_;     // d x d_model, token_j = x_j * embed_row_j + pos_row_j
    Matrix pos_;       // d x d_model
    Matrix wq_, wk_, wv_;  // d_model x d_model
    Matrix ff1_w_;     // d_model x ff_hidden
    Matrix ff1_b_;     // ff_hidden x 1
    Matrix ff2_w_;     // ff_hidden x d_model
    Matrix ff2_b_;     // d_model x 1
    Matrix out_w_;     // d_model x 1
    Matrix out_b_;     // d x 1

    Matrix g_embed_, g_pos_, g_wq_, g_wk_, g_wv_;
    Matrix g_ff1_w_, g_ff1_b_, g_ff2_w_, g_ff2_b_, g_out_w_, g_out_b_;

    BaselineStats baseline_;
    std::vector<double> loss_curve_;
};

// Minibatch SGD with momentum; deterministic given cfg.seed. Baseline stats
// are computed over all rows of X after training. Throws DataError when the
// loss diverges to a non-finite value.
Autoencoder train_autoencoder(const Matrix& X, const TrainConfig& cfg);
TransformerAutoencoder train_transformer_ae(const Matrix& X, const TrainConfig& cfg);

struct ReconstructionError {
    Vector per_sample;  // squared-L2 residual per row
    double mean = 0.0;
};

ReconstructionError reconstruction_error(const Autoencoder& model, const Matrix& X);
ReconstructionError reconstruction_error(const TransformerAutoencoder& model, const Matrix& X);

struct DriftDelta {
    double delta = 0.0;  // batch mean error - baseline mean error
    double z = 0.0;      // delta / baseline std (+inf sentinel when std == 0)
};

DriftDelta drift_delta(const Autoencoder& model, const Matrix& batch_X);
DriftDelta drift_delta(const TransformerAutoencoder& model, const Matrix& batch_X);
DriftDelta drift_delta_from(const BaselineStats& baseline, double batch_mean_error);

}  // namespace driftmon::neural
