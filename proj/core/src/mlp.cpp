#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "affectbench/models.hpp"
#include "affectbench/rng.hpp"

namespace afb {

namespace {

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& z) {
    Eigen::MatrixXd out(z.rows(), z.cols());
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        const double m = z.row(i).maxCoeff();
        Eigen::ArrayXd e = (z.row(i).array() - m).exp();
        out.row(i) = (e / e.sum()).matrix();
    }
    return out;
}

Eigen::MatrixXd forward_probs(const MlpModel::Params& p, const Eigen::MatrixXd& X,
                              Eigen::MatrixXd* hidden_out = nullptr) {
    Eigen::MatrixXd h = ((X * p.w1).rowwise() + p.b1.transpose()).cwiseMax(0.0);
    if (hidden_out) *hidden_out = h;
    return softmax_rows((h * p.w2).rowwise() + p.b2.transpose());
}

}  // namespace

double MlpModel::loss(const Params& p, const Eigen::MatrixXd& X, const std::vector<int>& y) {
    const Eigen::MatrixXd probs = forward_probs(p, X);
    double total = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        total -= std::log(std::max(probs(i, y[static_cast<std::size_t>(i)]), 1e-300));
    return total / static_cast<double>(X.rows());
}

MlpModel::Params MlpModel::gradient(const Params& p, const Eigen::MatrixXd& X,
                                    const std::vector<int>& y) {
    const double n = static_cast<double>(X.rows());
    Eigen::MatrixXd h;
    Eigen::MatrixXd probs = forward_probs(p, X, &h);
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        probs(i, y[static_cast<std::size_t>(i)]) -= 1.0;  // dL/dlogits
    probs /= n;

    Params g;
    g.w2 = h.transpose() * probs;
    g.b2 = probs.colwise().sum();
    Eigen::MatrixXd dh = probs * p.w2.transpose();
    dh = (h.array() > 0.0).select(dh, 0.0);
    g.w1 = X.transpose() * dh;
    g.b1 = dh.colwise().sum();
    return g;
}

std::unique_ptr<MlpModel> MlpModel::train(const Eigen::MatrixXd& X, const std::vector<int>& y,
                                          int hidden, std::uint64_t seed, int epochs) {
    const auto n = X.rows();
    const int d = static_cast<int>(X.cols());
    if (n != static_cast<Eigen::Index>(y.size())) throw Error("train_mlp: X/y length mismatch");
    const auto classes = distinct_classes(y);
    const int n_classes = static_cast<int>(classes.size());
    if (n_classes < 2) throw Error("train_mlp: single class");

    std::map<int, int> class_index;
    for (std::size_t c = 0; c < classes.size(); ++c) class_index[classes[c]] = static_cast<int>(c);
    std::vector<int> yi(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) yi[i] = class_index[y[i]];

    Rng rng = Rng::derive(seed, "mlp");
    auto glorot = [&](Eigen::MatrixXd& w, int fan_in, int fan_out) {
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = rng.uniform(-limit, limit);
    };

    Params p;
    p.w1.resize(d, hidden);
    p.b1 = Eigen::VectorXd::Zero(hidden);
    p.w2.resize(hidden, n_classes);
    p.b2 = Eigen::VectorXd::Zero(n_classes);
    glorot(p.w1, d, hidden);
    glorot(p.w2, hidden, n_classes);

    // Adam state
    Params m, v;
    m.w1 = Eigen::MatrixXd::Zero(d, hidden);
    m.b1 = Eigen::VectorXd::Zero(hidden);
    m.w2 = Eigen::MatrixXd::Zero(hidden, n_classes);
    m.b2 = Eigen::VectorXd::Zero(n_classes);
    v = m;

    const double lr = 0.001, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    const Eigen::Index batch = std::min<Eigen::Index>(200, n);
    long step = 0;

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(order);
        for (Eigen::Index start = 0; start < n; start += batch) {
            const Eigen::Index count = std::min(batch, n - start);
            Eigen::MatrixXd xb(count, d);
            std::vector<int> yb(static_cast<std::size_t>(count));
            for (Eigen::Index i = 0; i < count; ++i) {
                xb.row(i) = X.row(order[static_cast<std::size_t>(start + i)]);
                yb[static_cast<std::size_t>(i)] =
                    yi[static_cast<std::size_t>(order[static_cast<std::size_t>(start + i)])];
            }
            const Params g = gradient(p, xb, yb);
            ++step;
            const double bc1 = 1.0 - std::pow(beta1, step);
            const double bc2 = 1.0 - std::pow(beta2, step);
            auto adam = [&](auto& param, auto& mm, auto& vv, const auto& grad) {
                mm = beta1 * mm + (1.0 - beta1) * grad;
                vv = (beta2 * vv.array() + (1.0 - beta2) * grad.array().square()).matrix();
                param.array() -=
                    lr * (mm.array() / bc1) / ((vv.array() / bc2).sqrt() + eps);
            };
            adam(p.w1, m.w1, v.w1, g.w1);
            adam(p.b1, m.b1, v.b1, g.b1);
            adam(p.w2, m.w2, v.w2, g.w2);
            adam(p.b2, m.b2, v.b2, g.b2);
        }
        if (!std::isfinite(loss(p, X, yi))) throw Error("diverged");
    }

    auto model = std::make_unique<MlpModel>();
    model->params_ = std::move(p);
    model->classes_ = classes;
    return model;
}

Prediction MlpModel::predict(const Eigen::MatrixXd& X) const {
    check_dims(X);
    Prediction pred;
    pred.scores = forward_probs(params_, X);
    pred.labels.resize(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        Eigen::Index best;
        pred.scores.row(i).maxCoeff(&best);
        pred.labels[static_cast<std::size_t>(i)] = classes_[static_cast<std::size_t>(best)];
    }
    return pred;
}

}  // namespace afb
