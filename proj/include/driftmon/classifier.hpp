#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace driftmon::classifier {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // leaf value

    bool is_leaf() const { return feature < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes;  // node 0 is the root

    double predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
};

struct GBDTConfig {
    int rounds = 100;
    double learning_rate = 0.1;
    int max_depth = 4;
    int min_samples_leaf = 5;
    double l2 = 1.0;  // leaf-value regularization
};

// One tree per class per boosting round, fitted to the negative gradient of
// multiclass log-loss (y_onehot - p); splits maximize squared-residual
// reduction over exact sorted feature values.
class GBDTModel {
public:
    GBDTModel() = default;
    GBDTModel(std::vector<std::string> classes, GBDTConfig config)
        : classes_(std::move(classes)), config_(config) {}

    std::size_t n_classes() const { return classes_.size(); }
    const std::vector<std::string>& classes() const { return classes_; }
    const GBDTConfig& config() const { return config_; }
    std::size_t n_features() const { return n_features_; }

    const std::vector<std::vector<Tree>>& rounds() const { return rounds_; }
    std::vector<std::vector<Tree>>& rounds() { return rounds_; }
    void set_n_features(std::size_t n) { n_features_ = n; }

    const std::vector<double>& train_log_loss() const { return train_log_loss_; }
    std::vector<double>& train_log_loss() { return train_log_loss_; }

    // Raw per-class ensemble scores for one row.
    Vector scores(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;

    std::string save_json() const;
    static GBDTModel load_json(const std::string& text);

private:
    std::vector<std::string> classes_;
    GBDTConfig config_;
    std::size_t n_features_ = 0;
    std::vector<std::vector<Tree>> rounds_;  // [round][class]
    std::vector<double> train_log_loss_;
};

GBDTModel fit(const Matrix& X, const std::vector<int>& y,
              const std::vector<std::string>& class_names, const GBDTConfig& config);

// Softmax over per-class ensemble scores; a point on the probability simplex.
Vector predict_proba(const GBDTModel& model, const Eigen::Ref<const Eigen::RowVectorXd>& row);

// Deterministic argmax (lowest class index wins ties).
int predict_class(const GBDTModel& model, const Eigen::Ref<const Eigen::RowVectorXd>& row);

// u = p_max - p_second_max, in [0, 1]. Requires at least two classes.
double softmax_margin(const Vector& p);

// U_t = 1 - mean margin over the batch: larger means more uncertain.
double batch_uncertainty(const GBDTModel& model, const Matrix& X);

// (accuracy, error) over argmax predictions.
std::pair<double, double> batch_error(const GBDTModel& model, const Matrix& X,
                                      const std::vector<int>& y);

// Accuracy drop when the feature column is shuffled, averaged over repeats.
std::vector<double> permutation_importance(const GBDTModel& model, const Matrix& X,
                                           const std::vector<int>& y, std::uint64_t seed,
                                           int repeats = 5);

}  // namespace driftmon::classifier
