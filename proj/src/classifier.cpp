#include "driftmon/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "driftmon/errors.hpp"
#include "driftmon/rng.hpp"

namespace driftmon::classifier {

namespace {

// Residual-sum statistics for one candidate split side.
struct SplitStats {
    double sum = 0.0;
    double count = 0.0;
};

struct NodeBuild {
    int node_id = -1;
    double sum = 0.0;
    double count = 0.0;
    int depth = 0;
};

double sse_gain(double sum_left, double n_left, double sum_right, double n_right) {
    // Reduction of residual SSE: SL^2/nL + SR^2/nR - S^2/n (constant term
    // dropped; comparisons only).
    const double total = sum_left + sum_right;
    const double n = n_left + n_right;
    return sum_left * sum_left / n_left + sum_right * sum_right / n_right - total * total / n;
}

// Regression tree on residuals; exact split search over presorted features.
class TreeBuilder {
public:
    TreeBuilder(const Matrix& X, const std::vector<std::vector<int>>& sorted_rows,
                const GBDTConfig& config)
        : X_(X), sorted_rows_(sorted_rows), config_(config) {}

    // residual: per-row negative gradient; hessian: per-row curvature.
    Tree build(const Eigen::VectorXd& residual, const Eigen::VectorXd& hessian,
               std::vector<int>& node_of_row) {
        Tree tree;
        const int n = static_cast<int>(X_.rows());
        std::fill(node_of_row.begin(), node_of_row.end(), 0);

        tree.nodes.push_back(TreeNode{});
        std::vector<NodeBuild> frontier;
        {
            NodeBuild root;
            root.node_id = 0;
            root.count = static_cast<double>(n);
            root.sum = residual.sum();
            root.depth = 0;
            frontier.push_back(root);
        }

        while (!frontier.empty()) {
            // Best split per frontier node, found in one pass per feature.
            struct Candidate {
                double gain = 0.0;
                int feature = -1;
                double threshold = 0.0;
            };
            std::vector<Candidate> best(frontier.size());
            std::vector<int> slot_of_node(tree.nodes.size(), -1);
            for (std::size_t s = 0; s < frontier.size(); ++s) {
                slot_of_node[static_cast<std::size_t>(frontier[s].node_id)] = static_cast<int>(s);
            }

            std::vector<SplitStats> left(frontier.size());
            std::vector<double> last_value(frontier.size(), 0.0);
            std::vector<bool> seen_any(frontier.size(), false);

            for (int f = 0; f < X_.cols(); ++f) {
                std::fill(left.begin(), left.end(), SplitStats{});
                std::fill(seen_any.begin(), seen_any.end(), false);
                for (int row : sorted_rows_[static_cast<std::size_t>(f)]) {
                    const int node = node_of_row[static_cast<std::size_t>(row)];
                    if (node < 0) continue;
                    const int slot = slot_of_node[static_cast<std::size_t>(node)];
                    if (slot < 0) continue;
                    const double value = X_(row, f);
                    auto& stats = left[static_cast<std::size_t>(slot)];
                    const auto& node_build = frontier[static_cast<std::size_t>(slot)];

                    if (seen_any[static_cast<std::size_t>(slot)] &&
                        value > last_value[static_cast<std::size_t>(slot)]) {
                        const double n_left = stats.count;
                        const double n_right = node_build.count - n_left;
                        if (n_left >= config_.min_samples_leaf && n_right >= config_.min_samples_leaf) {
                            const double gain = sse_gain(stats.sum, n_left,
                                                         node_build.sum - stats.sum, n_right);
                            auto& cand = best[static_cast<std::size_t>(slot)];
                            if (gain > cand.gain + 1e-12) {
                                cand.gain = gain;
                                cand.feature = f;
                                cand.threshold =
                                    0.5 * (last_value[static_cast<std::size_t>(slot)] + value);
                            }
                        }
                    }
                    stats.sum += residual(row);
                    stats.count += 1.0;
                    last_value[static_cast<std::size_t>(slot)] = value;
                    seen_any[static_cast<std::size_t>(slot)] = true;
                }
            }

            // Apply splits; children become the next frontier.
            std::vector<NodeBuild> next;
            std::vector<bool> splits(frontier.size(), false);
            for (std::size_t s = 0; s < frontier.size(); ++s) {
                const auto& cand = best[s];
                const auto& node_build = frontier[s];
                if (cand.feature < 0 || node_build.depth >= config_.max_depth) continue;
                splits[s] = true;
                auto& node = tree.nodes[static_cast<std::size_t>(node_build.node_id)];
                node.feature = cand.feature;
                node.threshold = cand.threshold;
                node.left = static_cast<int>(tree.nodes.size());
                node.right = node.left + 1;
                tree.nodes.push_back(TreeNode{});
                tree.nodes.push_back(TreeNode{});

                NodeBuild l, r;
                l.node_id = node.left;
                r.node_id = node.right;
                l.depth = r.depth = node_build.depth + 1;
                next.push_back(l);
                next.push_back(r);
            }
            if (next.empty()) break;

            // Route rows to children and refresh child residual sums.
            std::vector<int> next_slot(tree.nodes.size(), -1);
            for (std::size_t s = 0; s < next.size(); ++s) {
                next_slot[static_cast<std::size_t>(next[s].node_id)] = static_cast<int>(s);
            }
            for (int row = 0; row < n; ++row) {
                const int node = node_of_row[static_cast<std::size_t>(row)];
                if (node < 0) continue;
                const int slot = slot_of_node[static_cast<std::size_t>(node)];
                if (slot < 0 || !splits[static_cast<std::size_t>(slot)]) continue;
                const auto& parent = tree.nodes[static_cast<std::size_t>(node)];
                const int child = X_(row, parent.feature) < parent.threshold ? parent.left
                                                                             : parent.right;
                node_of_row[static_cast<std::size_t>(row)] = child;
                auto& nb = next[static_cast<std::size_t>(next_slot[static_cast<std::size_t>(child)])];
                nb.sum += residual(row);
                nb.count += 1.0;
            }
            frontier = std::move(next);
        }

        // Newton leaf values: sum(residual) / (sum(hessian) + l2).
        std::vector<double> leaf_sum(tree.nodes.size(), 0.0);
        std::vector<double> leaf_hess(tree.nodes.size(), 0.0);
        for (int row = 0; row < n; ++row) {
            const int node = node_of_row[static_cast<std::size_t>(row)];
            leaf_sum[static_cast<std::size_t>(node)] += residual(row);
            leaf_hess[static_cast<std::size_t>(node)] += hessian(row);
        }
        for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
            if (tree.nodes[i].is_leaf()) {
                tree.nodes[i].value = leaf_sum[i] / (leaf_hess[i] + config_.l2);
            }
        }
        return tree;
    }

private:
    const Matrix& X_;
    const std::vector<std::vector<int>>& sorted_rows_;
    const GBDTConfig& config_;
};

Eigen::VectorXd softmax_vector(const Eigen::VectorXd& scores) {
    const double mx = scores.maxCoeff();
    Eigen::VectorXd p = (scores.array() - mx).exp();
    return p / p.sum();
}

}  // namespace

double Tree::predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
    int node = 0;
    while (!nodes[static_cast<std::size_t>(node)].is_leaf()) {
        const auto& nd = nodes[static_cast<std::size_t>(node)];
        node = row(nd.feature) < nd.threshold ? nd.left : nd.right;
    }
    return nodes[static_cast<std::size_t>(node)].value;
}

Vector GBDTModel::scores(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
    Vector s = Vector::Zero(static_cast<Eigen::Index>(classes_.size()));
    for (const auto& round : rounds_) {
        for (std::size_t c = 0; c < round.size(); ++c) {
            s(static_cast<Eigen::Index>(c)) += config_.learning_rate * round[c].predict(row);
        }
    }
    return s;
}

GBDTModel fit(const Matrix& X, const std::vector<int>& y,
              const std::vector<std::string>& class_names, const GBDTConfig& config) {
    const auto n = static_cast<std::size_t>(X.rows());
    if (n == 0 || y.size() != n) {
        throw std::invalid_argument("gbdt: X rows and y length must match and be nonzero");
    }
    if (!X.allFinite()) {
        throw std::invalid_argument("gbdt: non-finite feature value");
    }
    const std::size_t k = class_names.size();
    if (k < 2) {
        throw std::invalid_argument("gbdt: need at least 2 classes");
    }
    std::set<int> distinct(y.begin(), y.end());
    if (distinct.size() < 2) {
        throw std::invalid_argument("gbdt: training labels contain a single class");
    }
    for (int cls : distinct) {
        if (cls < 0 || static_cast<std::size_t>(cls) >= k) {
            throw std::invalid_argument("gbdt: label index out of range");
        }
    }

    GBDTModel model(class_names, config);
    model.set_n_features(static_cast<std::size_t>(X.cols()));

    // Presort rows per feature once; ties resolve by row index.
    std::vector<std::vector<int>> sorted_rows(static_cast<std::size_t>(X.cols()));
    for (int f = 0; f < X.cols(); ++f) {
        auto& rows = sorted_rows[static_cast<std::size_t>(f)];
        rows.resize(n);
        std::iota(rows.begin(), rows.end(), 0);
        std::sort(rows.begin(), rows.end(), [&X, f](int a, int b) {
            const double va = X(a, f);
            const double vb = X(b, f);
            return va < vb || (va == vb && a < b);
        });
    }

    Matrix F = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    Matrix P(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    TreeBuilder builder(X, sorted_rows, config);
    std::vector<int> node_of_row(n, 0);
    Eigen::VectorXd residual(static_cast<Eigen::Index>(n));
    Eigen::VectorXd hessian(static_cast<Eigen::Index>(n));

    for (int round = 0; round < config.rounds; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            P.row(static_cast<Eigen::Index>(i)) =
                softmax_vector(F.row(static_cast<Eigen::Index>(i)).transpose()).transpose();
        }

        std::vector<Tree> trees;
        trees.reserve(k);
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t i = 0; i < n; ++i) {
                const double p = P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
                const double target = y[i] == static_cast<int>(c) ? 1.0 : 0.0;
                residual(static_cast<Eigen::Index>(i)) = target - p;
                hessian(static_cast<Eigen::Index>(i)) = std::max(p * (1.0 - p), 1e-12);
            }
            Tree tree = builder.build(residual, hessian, node_of_row);
            for (std::size_t i = 0; i < n; ++i) {
                F(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) +=
                    config.learning_rate *
                    tree.predict(X.row(static_cast<Eigen::Index>(i)));
            }
            trees.push_back(std::move(tree));
        }
        model.rounds().push_back(std::move(trees));

        double log_loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::VectorXd p = softmax_vector(F.row(static_cast<Eigen::Index>(i)).transpose());
            log_loss -= std::log(std::max(p(y[i]), 1e-300));
        }
        model.train_log_loss().push_back(log_loss / static_cast<double>(n));
    }
    return model;
}

Vector predict_proba(const GBDTModel& model, const Eigen::Ref<const Eigen::RowVectorXd>& row) {
    if (model.n_features() != 0 && static_cast<std::size_t>(row.size()) != model.n_features()) {
        throw std::invalid_argument("gbdt: input width " + std::to_string(row.size()) +
                                    " does not match training width " +
                                    std::to_string(model.n_features()));
    }
    return softmax_vector(model.scores(row));
}

int predict_class(const GBDTModel& model, const Eigen::Ref<const Eigen::RowVectorXd>& row) {
    const Vector p = predict_proba(model, row);
    int best = 0;
    for (Eigen::Index c = 1; c < p.size(); ++c) {
        if (p(c) > p(best)) best = static_cast<int>(c);  // lowest index wins ties
    }
    return best;
}

double softmax_margin(const Vector& p) {
    if (p.size() < 2) {
        throw std::invalid_argument("softmax_margin: need at least 2 classes");
    }
    double top = -std::numeric_limits<double>::infinity();
    double second = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p(i) > top) {
            second = top;
            top = p(i);
        } else if (p(i) > second) {
            second = p(i);
        }
    }
    return top - second;
}

double batch_uncertainty(const GBDTModel& model, const Matrix& X) {
    if (X.rows() == 0) {
        throw std::invalid_argument("batch_uncertainty: empty batch");
    }
    double margin_sum = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        margin_sum += softmax_margin(predict_proba(model, X.row(i)));
    }
    return 1.0 - margin_sum / static_cast<double>(X.rows());
}

std::pair<double, double> batch_error(const GBDTModel& model, const Matrix& X,
                                      const std::vector<int>& y) {
    if (X.rows() == 0 || static_cast<std::size_t>(X.rows()) != y.size()) {
        throw std::invalid_argument("batch_error: empty batch or size mismatch");
    }
    std::size_t correct = 0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        if (predict_class(model, X.row(i)) == y[static_cast<std::size_t>(i)]) ++correct;
    }
    const double accuracy = static_cast<double>(correct) / static_cast<double>(X.rows());
    return {accuracy, 1.0 - accuracy};
}

std::vector<double> permutation_importance(const GBDTModel& model, const Matrix& X,
                                           const std::vector<int>& y, std::uint64_t seed,
                                           int repeats) {
    const double base_accuracy = batch_error(model, X, y).first;
    std::vector<double> importances(static_cast<std::size_t>(X.cols()), 0.0);
    Rng rng(seed);
    for (int f = 0; f < X.cols(); ++f) {
        double drop_sum = 0.0;
        for (int r = 0; r < repeats; ++r) {
            Matrix shuffled = X;
            std::vector<Eigen::Index> order(static_cast<std::size_t>(X.rows()));
            std::iota(order.begin(), order.end(), 0);
            rng.shuffle(order);
            for (Eigen::Index i = 0; i < X.rows(); ++i) {
                shuffled(i, f) = X(order[static_cast<std::size_t>(i)], f);
            }
            drop_sum += base_accuracy - batch_error(model, shuffled, y).first;
        }
        importances[static_cast<std::size_t>(f)] = drop_sum / static_cast<double>(repeats);
    }
    return importances;
}

std::string GBDTModel::save_json() const {
    nlohmann::json j;
    j["format"] = "driftmon-checkpoint";
    j["version"] = 1;
    j["kind"] = "gbdt";
    j["classes"] = classes_;
    j["n_features"] = n_features_;
    j["config"] = {{"rounds", config_.rounds},
                   {"learning_rate", config_.learning_rate},
                   {"max_depth", config_.max_depth},
                   {"min_samples_leaf", config_.min_samples_leaf},
                   {"l2", config_.l2}};
    nlohmann::json rounds_json = nlohmann::json::array();
    for (const auto& round : rounds_) {
        nlohmann::json round_json = nlohmann::json::array();
        for (const auto& tree : round) {
            nlohmann::json nodes = nlohmann::json::array();
            for (const auto& nd : tree.nodes) {
                nodes.push_back({{"f", nd.feature},
                                 {"t", nd.threshold},
                                 {"l", nd.left},
                                 {"r", nd.right},
                                 {"v", nd.value}});
            }
            round_json.push_back({{"nodes", std::move(nodes)}});
        }
        rounds_json.push_back(std::move(round_json));
    }
    j["rounds"] = std::move(rounds_json);
    return j.dump();
}

GBDTModel GBDTModel::load_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("format", "") != "driftmon-checkpoint" || j.value("kind", "") != "gbdt") {
        throw DataError("checkpoint: not a gbdt checkpoint");
    }
    if (j.value("version", 0) != 1) {
        throw DataError("checkpoint: unsupported version");
    }
    GBDTConfig config;
    const auto& cj = j.at("config");
    config.rounds = cj.at("rounds").get<int>();
    config.learning_rate = cj.at("learning_rate").get<double>();
    config.max_depth = cj.at("max_depth").get<int>();
    config.min_samples_leaf = cj.at("min_samples_leaf").get<int>();
    config.l2 = cj.at("l2").get<double>();

    GBDTModel model(j.at("classes").get<std::vector<std::string>>(), config);
    model.set_n_features(j.at("n_features").get<std::size_t>());
    for (const auto& round_json : j.at("rounds")) {
        std::vector<Tree> round;
        for (const auto& tree_json : round_json) {
            Tree tree;
            for (const auto& nd : tree_json.at("nodes")) {
                TreeNode node;
                node.feature = nd.at("f").get<int>();
                node.threshold = nd.at("t").get<double>();
                node.left = nd.at("l").get<int>();
                node.right = nd.at("r").get<int>();
                node.value = nd.at("v").get<double>();
                tree.nodes.push_back(node);
            }
            round.push_back(std::move(tree));
        }
        model.rounds().push_back(std::move(round));
    }
    return model;
}

}  // namespace driftmon::classifier
