#include "affectbench/config.hpp"

#include <fstream>
#include <json.hpp>

namespace afb {

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("parse error in " + path + ": " + e.what());
    }
    return j;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
    const json j = read_json_file(path);
    RunConfig cfg;
    for (const auto& dj : j.value("datasets", json::array())) {
        DatasetConfig d;
        d.id = dj.at("id");
        d.config_path = dj.at("config");
        d.eda_signal_path = dj.value("eda_signal", "");
        d.ppg_signal_path = dj.value("ppg_signal", "");
        d.annotation_path = dj.value("annotations", "");
        cfg.datasets.push_back(std::move(d));
    }
    if (j.contains("modalities")) {
        cfg.modalities.clear();
        for (const auto& m : j["modalities"]) cfg.modalities.push_back(modality_from_string(m));
    }
    if (j.contains("tasks")) {
        cfg.tasks.clear();
        for (const auto& t : j["tasks"]) cfg.tasks.push_back(task_from_string(t));
    }
    if (j.contains("models")) cfg.models = j["models"].get<std::vector<std::string>>();
    if (j.contains("protocols")) {
        cfg.protocols.clear();
        for (const std::string p : j["protocols"]) {
            if (p == "loso")
                cfg.protocols.push_back(Protocol::LOSO);
            else if (p == "split_swap")
                cfg.protocols.push_back(Protocol::SplitSwap);
            else
                throw Error("unknown protocol: " + p);
        }
    }
    if (j.contains("subsample_fractions"))
        cfg.subsample_fractions = j["subsample_fractions"].get<std::vector<double>>();
    if (j.contains("rebalance")) {
        const auto& rj = j["rebalance"];
        cfg.rebalance.oversample = rj.value("oversample", true);
        cfg.rebalance.smote_if_imbalanced = rj.value("smote_if_imbalanced", true);
        cfg.rebalance.smote_k = rj.value("smote_k", 5);
    }
    if (j.contains("cohort_dimensions"))
        for (const std::string d : j["cohort_dimensions"])
            cfg.cohort_dimensions.push_back(cohort_dimension_from_string(d));
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.workers = j.value("workers", cfg.workers);
    const std::string mode = j.value("artifact_mode", "report");
    if (mode == "report")
        cfg.artifact_mode = ArtifactMode::Report;
    else if (mode == "exclude")
        cfg.artifact_mode = ArtifactMode::Exclude;
    else
        throw Error("unknown artifact_mode: " + mode);
    return cfg;
}

DatasetSpecification load_dataset_spec(const std::string& path) {
    const json j = read_json_file(path);
    DatasetSpecification spec;

    const auto& dj = j.at("descriptor");
    spec.descriptor.name = dj.at("name");
    spec.descriptor.setting = setting_from_string(dj.at("setting"));
    spec.descriptor.device = device_from_string(dj.at("device"));
    spec.descriptor.labeling = labeling_from_string(dj.at("labeling"));
    for (const auto& pj : dj.value("participants", json::array())) {
        ParticipantInfo p;
        p.participant_id = pj.at("id");
        if (pj.contains("gender")) p.gender = gender_from_string(pj["gender"]);
        if (pj.contains("age_years")) {
            const int age = pj["age_years"];
            if (age <= 0) throw Error("nonpositive age for participant " + p.participant_id);
            p.age_years = age;
        }
        spec.descriptor.participants.push_back(std::move(p));
    }
    for (const auto& [key, value] : dj.at("sampling_rates_hz").items())
        spec.descriptor.sampling_rates[modality_from_string(key)] = value;

    const auto& sj = j.at("scheme");
    spec.scheme.name = sj.at("name");
    for (const auto& rj : sj.value("rules", json::array())) {
        BinRule rule;
        rule.task_pattern = rj.at("task");
        rule.arousal = arousal_from_string(rj.at("arousal"));
        rule.valence = valence_from_string(rj.at("valence"));
        spec.scheme.rules.push_back(std::move(rule));
    }

    spec.segmentation = j.value("segmentation", "task");
    if (spec.segmentation != "task" && spec.segmentation != "hourly" &&
        spec.segmentation != "prompt")
        throw Error("unknown segmentation mode: " + spec.segmentation);
    return spec;
}

std::string dataset_spec_to_json(const DatasetSpecification& spec) {
    json dj;
    dj["name"] = spec.descriptor.name;
    dj["setting"] = to_string(spec.descriptor.setting);
    dj["device"] = to_string(spec.descriptor.device);
    dj["labeling"] = to_string(spec.descriptor.labeling);
    dj["participants"] = json::array();
    for (const auto& p : spec.descriptor.participants) {
        json pj;
        pj["id"] = p.participant_id;
        if (p.gender) pj["gender"] = to_string(*p.gender);
        if (p.age_years) pj["age_years"] = *p.age_years;
        dj["participants"].push_back(std::move(pj));
    }
    json rates;
    for (const auto& [m, r] : spec.descriptor.sampling_rates) rates[to_string(m)] = r;
    dj["sampling_rates_hz"] = std::move(rates);

    json sj;
    sj["name"] = spec.scheme.name;
    sj["rules"] = json::array();
    for (const auto& r : spec.scheme.rules)
        sj["rules"].push_back({{"task", r.task_pattern},
                               {"arousal", to_string(r.arousal)},
                               {"valence", to_string(r.valence)}});

    json j;
    j["descriptor"] = std::move(dj);
    j["scheme"] = std::move(sj);
    j["segmentation"] = spec.segmentation;
    return j.dump(2);
}

}  // namespace afb
