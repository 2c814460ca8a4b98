#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "affectbench/types.hpp"

namespace afb {

struct ModelSpec {
    enum class Kind { LDA, RF, MLP };
    Kind kind = Kind::RF;
    int n_trees = 100;       // RF
    int hidden_units = 100;  // MLP
    std::uint64_t seed = 42;

    std::string name() const {
        switch (kind) {
            case Kind::LDA: return "lda";
            case Kind::RF: return "rf";
            case Kind::MLP: return "mlp";
        }
        return "?";
    }
    static ModelSpec from_name(const std::string& name, std::uint64_t seed = 42);
};

struct Prediction {
    std::vector<int> labels;
    Eigen::MatrixXd scores;  // rows x classes, aligned with Model::classes()
};

class Model {
public:
    virtual ~Model() = default;
    virtual Prediction predict(const Eigen::MatrixXd& X) const = 0;
    virtual const std::vector<int>& classes() const = 0;
    virtual int n_features() const = 0;
    virtual std::string kind_name() const = 0;

protected:
    void check_dims(const Eigen::MatrixXd& X) const {
        if (X.cols() != n_features())
            throw Error("predict: feature dimension mismatch (" + std::to_string(X.cols()) +
                        " vs " + std::to_string(n_features()) + ")");
    }
};

// ---- LDA ----

class LdaModel : public Model {
public:
    /// Shared-covariance discriminant fit through an SVD pseudo-inverse.
    static std::unique_ptr<LdaModel> train(const Eigen::MatrixXd& X, const std::vector<int>& y);

    Prediction predict(const Eigen::MatrixXd& X) const override;
    const std::vector<int>& classes() const override { return classes_; }
    int n_features() const override { return static_cast<int>(weights_.cols()); }
    std::string kind_name() const override { return "lda"; }

    /// Primary discriminant direction (n_components = 1 view).
    const Eigen::VectorXd& discriminant_direction() const { return direction_; }

    Eigen::MatrixXd weights_;    // classes x features
    Eigen::VectorXd intercepts_; // per class
    Eigen::VectorXd direction_;
    std::vector<int> classes_;
};

// ---- Random forest ----

struct TreeNode {
    int feature = -1;          // -1 for leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int leaf_class_index = -1;
};

struct Tree {
    std::vector<TreeNode> nodes;
    int classify(const Eigen::RowVectorXd& x) const;
};

class ForestModel : public Model {
public:
    static std::unique_ptr<ForestModel> train(const Eigen::MatrixXd& X, const std::vector<int>& y,
                                              int n_trees = 100, std::uint64_t seed = 42);

    Prediction predict(const Eigen::MatrixXd& X) const override;
    const std::vector<int>& classes() const override { return classes_; }
    int n_features() const override { return n_features_; }
    std::string kind_name() const override { return "rf"; }

    std::vector<Tree> trees_;
    std::vector<int> classes_;
    int n_features_ = 0;
    std::uint64_t seed_ = 42;
};

// ---- MLP ----

class MlpModel : public Model {
public:
    struct Params {
        Eigen::MatrixXd w1;  // features x hidden
        Eigen::VectorXd b1;
        Eigen::MatrixXd w2;  // hidden x classes
        Eigen::VectorXd b2;
    };

    static std::unique_ptr<MlpModel> train(const Eigen::MatrixXd& X, const std::vector<int>& y,
                                           int hidden = 100, std::uint64_t seed = 42,
                                           int epochs = 200);

    Prediction predict(const Eigen::MatrixXd& X) const override;
    const std::vector<int>& classes() const override { return classes_; }
    int n_features() const override { return static_cast<int>(params_.w1.rows()); }
    std::string kind_name() const override { return "mlp"; }

    /// Mean cross-entropy over the batch; y holds class indices.
    static double loss(const Params& p, const Eigen::MatrixXd& X, const std::vector<int>& y);
    /// Analytic gradient of `loss`, for training and the finite-difference check.
    static Params gradient(const Params& p, const Eigen::MatrixXd& X, const std::vector<int>& y);

    Params params_;
    std::vector<int> classes_;
};

/// Class index mapping shared by all trainers: sorted distinct labels.
std::vector<int> distinct_classes(const std::vector<int>& y);

/// Train per the spec's kind and hyperparameters.
std::unique_ptr<Model> train_model(const ModelSpec& spec, const Eigen::MatrixXd& X,
                                   const std::vector<int>& y);

// ---- persistence ----

std::string save_model(const Model& model);
std::unique_ptr<Model> load_model(const std::string& blob);

}  // namespace afb
