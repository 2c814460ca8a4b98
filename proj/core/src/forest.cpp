#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "affectbench/models.hpp"
#include "affectbench/rng.hpp"

namespace afb {

namespace {

struct TreeBuilder {
    const Eigen::MatrixXd& X;
    const std::vector<int>& yi;  // class indices
    int n_classes;
    int mtry;
    Rng& rng;
    std::vector<TreeNode> nodes;

    double gini(const std::vector<int>& counts, int total) const {
        if (total == 0) return 0.0;
        double g = 1.0;
        for (int c : counts) {
            const double p = static_cast<double>(c) / total;
            g -= p * p;
        }
        return g;
    }

    int majority(const std::vector<std::size_t>& rows) const {
        std::vector<int> counts(static_cast<std::size_t>(n_classes), 0);
        for (std::size_t r : rows) ++counts[static_cast<std::size_t>(yi[r])];
        // ties resolve to the lowest class index
        int best = 0;
        for (int c = 1; c < n_classes; ++c)
            if (counts[static_cast<std::size_t>(c)] > counts[static_cast<std::size_t>(best)])
                best = c;
        return best;
    }

    bool pure(const std::vector<std::size_t>& rows) const {
        for (std::size_t r : rows)
            if (yi[r] != yi[rows[0]]) return false;
        return true;
    }

    int build(std::vector<std::size_t>& rows) {
        const int node_id = static_cast<int>(nodes.size());
        nodes.push_back({});
        if (rows.size() < 2 || pure(rows)) {
            nodes[static_cast<std::size_t>(node_id)].leaf_class_index = majority(rows);
            return node_id;
        }

        // candidate features, sampled without replacement
        const int d = static_cast<int>(X.cols());
        std::vector<int> feats(static_cast<std::size_t>(d));
        std::iota(feats.begin(), feats.end(), 0);
        for (int i = 0; i < mtry && i < d; ++i) {
            const std::size_t j =
                static_cast<std::size_t>(i) + rng.index(static_cast<std::size_t>(d - i));
            std::swap(feats[static_cast<std::size_t>(i)], feats[j]);
        }

        double best_gini = std::numeric_limits<double>::infinity();
        int best_feature = -1;
        double best_threshold = 0.0;
        const int total = static_cast<int>(rows.size());
        const double parent_gini = [&] {
            std::vector<int> counts(static_cast<std::size_t>(n_classes), 0);
            for (std::size_t r : rows) ++counts[static_cast<std::size_t>(yi[r])];
            return gini(counts, total);
        }();

        for (int fi = 0; fi < mtry && fi < d; ++fi) {
            const int f = feats[static_cast<std::size_t>(fi)];
            std::vector<std::size_t> order = rows;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return X(static_cast<Eigen::Index>(a), f) < X(static_cast<Eigen::Index>(b), f);
            });
            std::vector<int> left(static_cast<std::size_t>(n_classes), 0);
            std::vector<int> right(static_cast<std::size_t>(n_classes), 0);
            for (std::size_t r : order) ++right[static_cast<std::size_t>(yi[r])];
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                const int c = yi[order[i]];
                ++left[static_cast<std::size_t>(c)];
                --right[static_cast<std::size_t>(c)];
                const double a = X(static_cast<Eigen::Index>(order[i]), f);
                const double b = X(static_cast<Eigen::Index>(order[i + 1]), f);
                if (a == b) continue;
                const int nl = static_cast<int>(i) + 1;
                const int nr = total - nl;
                const double w =
                    (nl * gini(left, nl) + nr * gini(right, nr)) / static_cast<double>(total);
                if (w < best_gini) {
                    best_gini = w;
                    best_feature = f;
                    best_threshold = 0.5 * (a + b);
                }
            }
        }

        if (best_feature < 0 || best_gini >= parent_gini) {
            nodes[static_cast<std::size_t>(node_id)].leaf_class_index = majority(rows);
            return node_id;
        }

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows) {
            if (X(static_cast<Eigen::Index>(r), best_feature) <= best_threshold)
                left_rows.push_back(r);
            else
                right_rows.push_back(r);
        }
        if (left_rows.empty() || right_rows.empty()) {
            nodes[static_cast<std::size_t>(node_id)].leaf_class_index = majority(rows);
            return node_id;
        }
        nodes[static_cast<std::size_t>(node_id)].feature = best_feature;
        nodes[static_cast<std::size_t>(node_id)].threshold = best_threshold;
        const int left_id = build(left_rows);
        nodes[static_cast<std::size_t>(node_id)].left = left_id;
        const int right_id = build(right_rows);
        nodes[static_cast<std::size_t>(node_id)].right = right_id;
        return node_id;
    }
};

}  // namespace

int Tree::classify(const Eigen::RowVectorXd& x) const {
    int id = 0;
    while (nodes[static_cast<std::size_t>(id)].feature >= 0) {
        const auto& n = nodes[static_cast<std::size_t>(id)];
        id = x(n.feature) <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(id)].leaf_class_index;
}

std::unique_ptr<ForestModel> ForestModel::train(const Eigen::MatrixXd& X,
                                                const std::vector<int>& y, int n_trees,
                                                std::uint64_t seed) {
    const auto n = X.rows();
    if (n != static_cast<Eigen::Index>(y.size())) throw Error("train_rf: X/y length mismatch");
    const auto classes = distinct_classes(y);
    if (classes.size() < 2) throw Error("train_rf: single class");

    std::map<int, int> class_index;
    for (std::size_t c = 0; c < classes.size(); ++c) class_index[classes[c]] = static_cast<int>(c);
    std::vector<int> yi(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) yi[i] = class_index[y[i]];

    const int mtry = std::max(1, static_cast<int>(std::lround(std::sqrt(X.cols()))));

    auto model = std::make_unique<ForestModel>();
    model->classes_ = classes;
    model->n_features_ = static_cast<int>(X.cols());
    model->seed_ = seed;
    model->trees_.resize(static_cast<std::size_t>(n_trees));

    for (int t = 0; t < n_trees; ++t) {
        // independent stream per tree; parallel training would not change results
        Rng rng = Rng::derive(seed, "tree/" + std::to_string(t));
        std::vector<std::size_t> rows(static_cast<std::size_t>(n));
        for (auto& r : rows) r = rng.index(static_cast<std::size_t>(n));
        TreeBuilder builder{X, yi, static_cast<int>(classes.size()), mtry, rng, {}};
        builder.build(rows);
        model->trees_[static_cast<std::size_t>(t)].nodes = std::move(builder.nodes);
    }
    return model;
}

Prediction ForestModel::predict(const Eigen::MatrixXd& X) const {
    check_dims(X);
    const int n_classes = static_cast<int>(classes_.size());
    Prediction pred;
    pred.scores = Eigen::MatrixXd::Zero(X.rows(), n_classes);
    pred.labels.resize(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (const auto& tree : trees_)
            pred.scores(i, tree.classify(X.row(i))) += 1.0;
        pred.scores.row(i) /= static_cast<double>(trees_.size());
        // argmax with ties to the lowest class index
        int best = 0;
        for (int c = 1; c < n_classes; ++c)
            if (pred.scores(i, c) > pred.scores(i, best)) best = c;
        pred.labels[static_cast<std::size_t>(i)] = classes_[static_cast<std::size_t>(best)];
    }
    return pred;
}

}  // namespace afb
