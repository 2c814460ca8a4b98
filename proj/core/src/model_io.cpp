#include <json.hpp>

#include "affectbench/models.hpp"

namespace afb {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const auto rows = j.size();
    const auto cols = rows ? j[0].size() : 0;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c];
    return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i];
    return v;
}

}  // namespace

std::string save_model(const Model& model) {
    json j;
    j["format_version"] = 1;
    j["kind"] = model.kind_name();
    j["classes"] = model.classes();

    if (const auto* lda = dynamic_cast<const LdaModel*>(&model)) {
        j["weights"] = matrix_to_json(lda->weights_);
        j["intercepts"] = vector_to_json(lda->intercepts_);
        j["direction"] = vector_to_json(lda->direction_);
    } else if (const auto* rf = dynamic_cast<const ForestModel*>(&model)) {
        j["n_features"] = rf->n_features_;
        j["seed"] = rf->seed_;
        json trees = json::array();
        for (const auto& tree : rf->trees_) {
            json nodes = json::array();
            for (const auto& n : tree.nodes)
                nodes.push_back({n.feature, n.threshold, n.left, n.right, n.leaf_class_index});
            trees.push_back(std::move(nodes));
        }
        j["trees"] = std::move(trees);
    } else if (const auto* mlp = dynamic_cast<const MlpModel*>(&model)) {
        j["w1"] = matrix_to_json(mlp->params_.w1);
        j["b1"] = vector_to_json(mlp->params_.b1);
        j["w2"] = matrix_to_json(mlp->params_.w2);
        j["b2"] = vector_to_json(mlp->params_.b2);
    } else {
        throw Error("save_model: unknown model type");
    }
    return j.dump();
}

std::unique_ptr<Model> load_model(const std::string& blob) try {
    const json j = json::parse(blob);
    if (j.at("format_version").get<int>() != 1)
        throw Error("load_model: unsupported format version");
    const std::string kind = j.at("kind");
    const std::vector<int> classes = j.at("classes").get<std::vector<int>>();

    if (kind == "lda") {
        auto model = std::make_unique<LdaModel>();
        model->classes_ = classes;
        model->weights_ = matrix_from_json(j.at("weights"));
        model->intercepts_ = vector_from_json(j.at("intercepts"));
        model->direction_ = vector_from_json(j.at("direction"));
        return model;
    }
    if (kind == "rf") {
        auto model = std::make_unique<ForestModel>();
        model->classes_ = classes;
        model->n_features_ = j.at("n_features");
        model->seed_ = j.at("seed");
        for (const auto& tj : j.at("trees")) {
            Tree tree;
            for (const auto& nj : tj)
                tree.nodes.push_back({nj[0], nj[1], nj[2], nj[3], nj[4]});
            model->trees_.push_back(std::move(tree));
        }
        return model;
    }
    if (kind == "mlp") {
        auto model = std::make_unique<MlpModel>();
        model->classes_ = classes;
        model->params_.w1 = matrix_from_json(j.at("w1"));
        model->params_.b1 = vector_from_json(j.at("b1"));
        model->params_.w2 = matrix_from_json(j.at("w2"));
        model->params_.b2 = vector_from_json(j.at("b2"));
        return model;
    }
    throw Error("load_model: unknown kind " + kind);
} catch (const json::exception& e) {
    throw Error(std::string("load_model: malformed blob: ") + e.what());
}

}  // namespace afb
