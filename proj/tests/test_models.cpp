#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "affectbench/models.hpp"
#include "affectbench/rng.hpp"

using namespace afb;

namespace {

// Two spherical Gaussians with equal covariance; the Bayes rule is the
// midpoint hyperplane between the means.
void gaussian_pair(Rng& rng, int n_per_class, double separation, Eigen::MatrixXd& X,
                   std::vector<int>& y) {
    const int d = 3;
    X.resize(2 * n_per_class, d);
    y.clear();
    for (int i = 0; i < 2 * n_per_class; ++i) {
        const int cls = i < n_per_class ? 0 : 1;
        for (int j = 0; j < d; ++j)
            X(i, j) = rng.normal() + (cls == 1 && j == 0 ? separation : 0.0);
        y.push_back(cls);
    }
}

}  // namespace

TEST_CASE("distinct classes are the sorted unique labels") {
    CHECK(distinct_classes({3, 1, 3, 0, 1}) == std::vector<int>{0, 1, 3});
}

TEST_CASE("lda matches the closed-form bayes rule on separable gaussians") {
    for (int seed = 0; seed < 20; ++seed) {
        Rng rng(static_cast<std::uint64_t>(seed) + 100);
        Eigen::MatrixXd X;
        std::vector<int> y;
        gaussian_pair(rng, 100, 4.0, X, y);

        const auto model = LdaModel::train(X, y);
        const auto pred = model->predict(X);

        // closed-form equal-covariance Bayes rule: sign of
        // (x - (mu0 + mu1) / 2)^T S^-1 (mu1 - mu0) with pooled covariance S
        Eigen::RowVectorXd mu0 = Eigen::RowVectorXd::Zero(X.cols());
        Eigen::RowVectorXd mu1 = Eigen::RowVectorXd::Zero(X.cols());
        for (int i = 0; i < X.rows(); ++i) (y[static_cast<std::size_t>(i)] ? mu1 : mu0) += X.row(i);
        mu0 /= static_cast<double>(X.rows() / 2);
        mu1 /= static_cast<double>(X.rows() / 2);
        Eigen::MatrixXd centered(X.rows(), X.cols());
        for (int i = 0; i < X.rows(); ++i)
            centered.row(i) = X.row(i) - (y[static_cast<std::size_t>(i)] ? mu1 : mu0);
        const Eigen::MatrixXd pooled =
            centered.transpose() * centered / static_cast<double>(X.rows());
        const Eigen::VectorXd w = pooled.ldlt().solve((mu1 - mu0).transpose());
        const Eigen::RowVectorXd mid = 0.5 * (mu0 + mu1);

        int agree = 0;
        for (int i = 0; i < X.rows(); ++i) {
            const int bayes = (X.row(i) - mid).dot(w.transpose()) > 0.0 ? 1 : 0;
            agree += bayes == pred.labels[static_cast<std::size_t>(i)];
        }
        CHECK(static_cast<double>(agree) / static_cast<double>(X.rows()) >= 0.99);
    }
}

TEST_CASE("lda posteriors are a valid softmax over classes") {
    Rng rng(7);
    Eigen::MatrixXd X;
    std::vector<int> y;
    gaussian_pair(rng, 50, 2.0, X, y);
    const auto model = LdaModel::train(X, y);
    const auto pred = model->predict(X);
    for (int i = 0; i < pred.scores.rows(); ++i) {
        CHECK(pred.scores.row(i).sum() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(pred.scores.row(i).minCoeff() >= 0.0);
    }
}

TEST_CASE("a single-feature threshold concept is learned exactly by the forest") {
    // axis-aligned separable data: x0 < 0 vs x0 > 1
    Eigen::MatrixXd X(40, 2);
    std::vector<int> y;
    Rng rng(5);
    for (int i = 0; i < 40; ++i) {
        const int cls = i % 2;
        X(i, 0) = cls ? 1.0 + rng.uniform() : -1.0 - rng.uniform();
        X(i, 1) = rng.normal();
        y.push_back(cls);
    }
    const auto model = ForestModel::train(X, y, 25, 42);
    const auto pred = model->predict(X);
    CHECK(pred.labels == y);
}

TEST_CASE("forest training is deterministic per seed") {
    Rng rng(9);
    Eigen::MatrixXd X;
    std::vector<int> y;
    gaussian_pair(rng, 40, 1.0, X, y);

    const auto a = ForestModel::train(X, y, 10, 77);
    const auto b = ForestModel::train(X, y, 10, 77);
    const auto c = ForestModel::train(X, y, 10, 78);
    CHECK(a->predict(X).labels == b->predict(X).labels);
    REQUIRE(a->trees_.size() == b->trees_.size());
    for (std::size_t t = 0; t < a->trees_.size(); ++t)
        CHECK(a->trees_[t].nodes.size() == b->trees_[t].nodes.size());
    CHECK(c->predict(X).scores != a->predict(X).scores);  // different stream
}

TEST_CASE("forest votes define the score distribution") {
    Rng rng(15);
    Eigen::MatrixXd X;
    std::vector<int> y;
    gaussian_pair(rng, 30, 3.0, X, y);
    const auto model = ForestModel::train(X, y, 20, 1);
    const auto pred = model->predict(X);
    for (int i = 0; i < pred.scores.rows(); ++i)
        CHECK(pred.scores.row(i).sum() == doctest::Approx(1.0));
}

TEST_CASE("mlp analytic gradients match central finite differences") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 4, h = 5, c = 3, n = 10;
        MlpModel::Params p;
        p.w1.resize(d, h);
        p.b1.resize(h);
        p.w2.resize(h, c);
        p.b2.resize(c);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < h; ++j) p.w1(i, j) = 0.5 * rng.normal();
        for (int j = 0; j < h; ++j) p.b1(j) = 0.1 * rng.normal();
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < c; ++j) p.w2(i, j) = 0.5 * rng.normal();
        for (int j = 0; j < c; ++j) p.b2(j) = 0.1 * rng.normal();

        Eigen::MatrixXd X(n, d);
        std::vector<int> y;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < d; ++j) X(i, j) = rng.normal();
            y.push_back(static_cast<int>(rng.index(c)));
        }

        const auto grad = MlpModel::gradient(p, X, y);
        const double eps = 1e-6;
        auto check_entry = [&](double& param, double analytic) {
            const double saved = param;
            param = saved + eps;
            const double up = MlpModel::loss(p, X, y);
            param = saved - eps;
            const double dn = MlpModel::loss(p, X, y);
            param = saved;
            const double numeric = (up - dn) / (2.0 * eps);
            const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
            CHECK(std::abs(numeric - analytic) / scale < 1e-4);
        };
        // spot-check a spread of parameters in every block
        check_entry(p.w1(0, 0), grad.w1(0, 0));
        check_entry(p.w1(d - 1, h - 1), grad.w1(d - 1, h - 1));
        check_entry(p.b1(2), grad.b1(2));
        check_entry(p.w2(1, 1), grad.w2(1, 1));
        check_entry(p.w2(h - 1, c - 1), grad.w2(h - 1, c - 1));
        check_entry(p.b2(0), grad.b2(0));
    }
}

TEST_CASE("mlp learns a separable problem and is deterministic per seed") {
    Rng rng(33);
    Eigen::MatrixXd X;
    std::vector<int> y;
    gaussian_pair(rng, 60, 4.0, X, y);

    const auto a = MlpModel::train(X, y, 16, 42, 200);
    const auto b = MlpModel::train(X, y, 16, 42, 200);
    const auto pred = a->predict(X);
    int hits = 0;
    for (int i = 0; i < X.rows(); ++i) hits += pred.labels[static_cast<std::size_t>(i)] == y[static_cast<std::size_t>(i)];
    CHECK(static_cast<double>(hits) / static_cast<double>(X.rows()) > 0.95);
    CHECK(a->params_.w1 == b->params_.w1);
    CHECK(a->params_.b2 == b->params_.b2);
}

TEST_CASE("predict rejects a feature-dimension mismatch") {
    Rng rng(3);
    Eigen::MatrixXd X;
    std::vector<int> y;
    gaussian_pair(rng, 20, 2.0, X, y);
    const auto model = LdaModel::train(X, y);
    Eigen::MatrixXd wrong(5, X.cols() + 1);
    wrong.setZero();
    CHECK_THROWS_AS(model->predict(wrong), Error);
}

TEST_CASE("model specs resolve by name") {
    CHECK(ModelSpec::from_name("rf").kind == ModelSpec::Kind::RF);
    CHECK(ModelSpec::from_name("lda").kind == ModelSpec::Kind::LDA);
    CHECK(ModelSpec::from_name("mlp").kind == ModelSpec::Kind::MLP);
    CHECK_THROWS_AS(ModelSpec::from_name("svm"), Error);
}

TEST_CASE("all three models survive a save/load round trip") {
    Rng rng(55);
    Eigen::MatrixXd X;
    std::vector<int> y;
    gaussian_pair(rng, 40, 3.0, X, y);

    for (const std::string name : {"lda", "rf", "mlp"}) {
        const auto model = train_model(ModelSpec::from_name(name), X, y);
        const auto loaded = load_model(save_model(*model));
        REQUIRE(loaded != nullptr);
        CHECK(loaded->kind_name() == name);
        const auto before = model->predict(X);
        const auto after = loaded->predict(X);
        CHECK(before.labels == after.labels);
        CHECK((before.scores - after.scores).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK_THROWS_AS(load_model("{\"kind\":\"nope\"}"), Error);
}
