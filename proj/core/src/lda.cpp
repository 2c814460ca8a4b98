#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <map>

#include "affectbench/models.hpp"

namespace afb {

std::vector<int> distinct_classes(const std::vector<int>& y) {
    std::vector<int> classes(y.begin(), y.end());
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    return classes;
}

ModelSpec ModelSpec::from_name(const std::string& name, std::uint64_t seed) {
    ModelSpec spec;
    spec.seed = seed;
    if (name == "lda")
        spec.kind = ModelSpec::Kind::LDA;
    else if (name == "rf")
        spec.kind = ModelSpec::Kind::RF;
    else if (name == "mlp")
        spec.kind = ModelSpec::Kind::MLP;
    else
        throw Error("unknown model kind: " + name);
    return spec;
}

std::unique_ptr<Model> train_model(const ModelSpec& spec, const Eigen::MatrixXd& X,
                                   const std::vector<int>& y) {
    switch (spec.kind) {
        case ModelSpec::Kind::LDA: return LdaModel::train(X, y);
        case ModelSpec::Kind::RF: return ForestModel::train(X, y, spec.n_trees, spec.seed);
        case ModelSpec::Kind::MLP:
            return MlpModel::train(X, y, spec.hidden_units, spec.seed);
    }
    throw Error("unknown model kind");
}

std::unique_ptr<LdaModel> LdaModel::train(const Eigen::MatrixXd& X, const std::vector<int>& y) {
    const auto n = X.rows();
    const auto d = X.cols();
    if (n != static_cast<Eigen::Index>(y.size())) throw Error("train_lda: X/y length mismatch");
    const auto classes = distinct_classes(y);
    const int n_classes = static_cast<int>(classes.size());
    if (n_classes < 2) throw Error("train_lda: single class");
    if (X.maxCoeff() == X.minCoeff()) throw Error("degenerate design");

    std::map<int, int> class_index;
    for (int c = 0; c < n_classes; ++c) class_index[classes[static_cast<std::size_t>(c)]] = c;

    Eigen::MatrixXd means = Eigen::MatrixXd::Zero(n_classes, d);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(n_classes);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int c = class_index[y[static_cast<std::size_t>(i)]];
        means.row(c) += X.row(i);
        counts(c) += 1.0;
    }
    for (int c = 0; c < n_classes; ++c) {
        if (counts(c) < 2) throw Error("train_lda: class with fewer than 2 rows");
        means.row(c) /= counts(c);
    }

    // pooled within-class covariance
    Eigen::MatrixXd centered(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        centered.row(i) = X.row(i) - means.row(class_index[y[static_cast<std::size_t>(i)]]);
    Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);

    // pseudo-inverse through SVD, rank-deficiency tolerant
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cov, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double tol = 1e-12 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
    Eigen::VectorXd inv_sv = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) inv_sv(i) = 1.0 / sv(i);
    const Eigen::MatrixXd pinv =
        svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();

    auto model = std::make_unique<LdaModel>();
    model->classes_ = classes;
    model->weights_ = means * pinv;  // classes x features
    model->intercepts_.resize(n_classes);
    for (int c = 0; c < n_classes; ++c) {
        const double prior = counts(c) / static_cast<double>(n);
        model->intercepts_(c) =
            -0.5 * model->weights_.row(c).dot(means.row(c)) + std::log(prior);
    }
    model->direction_ = (pinv * (means.row(n_classes - 1) - means.row(0)).transpose());
    return model;
}

Prediction LdaModel::predict(const Eigen::MatrixXd& X) const {
    check_dims(X);
    Prediction pred;
    const Eigen::MatrixXd scores =
        (X * weights_.transpose()).rowwise() + intercepts_.transpose();
    pred.scores.resize(X.rows(), scores.cols());
    pred.labels.resize(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        // softmax posterior over the linear class scores
        const double m = scores.row(i).maxCoeff();
        Eigen::ArrayXd e = (scores.row(i).array() - m).exp();
        pred.scores.row(i) = (e / e.sum()).matrix();
        Eigen::Index best;
        scores.row(i).maxCoeff(&best);
        pred.labels[static_cast<std::size_t>(i)] = classes_[static_cast<std::size_t>(best)];
    }
    return pred;
}

}  // namespace afb
