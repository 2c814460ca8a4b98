#include "affectbench/feature_registry.hpp"

#include <set>

namespace afb {

double FeatureVector::at(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return values[i];
    throw Error("no such feature: " + name);
}

bool FeatureVector::has(const std::string& name) const {
    for (const auto& n : names)
        if (n == name) return true;
    return false;
}

namespace registry {

const std::vector<std::string>& eda_feature_names() {
    static const std::vector<std::string> names = {
        "ku_eda",  "sk_eda",  "dynrange", "slope",      "variance",
        "entropy", "insc",    "first_derivative_mean",  "max_scr",   "min_scr",
        "nSCR",    "meanAmpSCR", "meanRespSCR", "sumAmpSCR", "sumRespSCR"};
    return names;
}

const std::vector<std::string>& hrv_feature_names() {
    static const std::vector<std::string> names = {
        "BPM",       "PPG_Rate_Mean", "HRV_MedianNN", "HRV_Prc20NN", "HRV_MinNN",
        "HRV_HTI",   "HRV_TINN",      "HRV_LF",       "HRV_HF",      "HRV_VHF",
        "HRV_LFn",   "HRV_HFn",       "HRV_LnHF",     "HRV_SD1",     "HRV_SD2",
        "HRV_SD1SD2", "HRV_CVI",      "HRV_ApEn",     "HRV_ShanEn"};
    return names;
}

const std::vector<std::string>& hrv_reserved_names() {
    static const std::vector<std::string> names = {
        "HRV_PSS",  "HRV_PAS",  "HRV_PI",   "HRV_C1d",  "HRV_C1a",
        "HRV_DFA_alpha1",
        "HRV_MFDFA_alpha1_Width", "HRV_MFDFA_alpha1_Peak", "HRV_MFDFA_alpha1_Mean",
        "HRV_MFDFA_alpha1_Max",   "HRV_MFDFA_alpha1_Delta",
        "HRV_MFDFA_alpha1_Asymmetry",
        "HRV_FuzzyEn", "HRV_MSEn", "HRV_CMSEn", "HRV_RCMSEn",
        "HRV_CD",   "HRV_HFD",  "HRV_KFD",  "HRV_LZC"};
    return names;
}

std::vector<std::string> columns_for(Modality modality, bool include_reserved) {
    std::vector<std::string> cols;
    if (modality == Modality::EDA || modality == Modality::Combined)
        cols = eda_feature_names();
    if (modality == Modality::PPG || modality == Modality::Combined) {
        const auto& hrv = hrv_feature_names();
        cols.insert(cols.end(), hrv.begin(), hrv.end());
        if (include_reserved) {
            const auto& rsv = hrv_reserved_names();
            cols.insert(cols.end(), rsv.begin(), rsv.end());
        }
    }
    return cols;
}

}  // namespace registry

FeatureVector combine_features(const FeatureVector& eda_fv, const FeatureVector& ppg_fv) {
    if (!eda_fv.segment_id.empty() && !ppg_fv.segment_id.empty() &&
        eda_fv.segment_id != ppg_fv.segment_id)
        throw Error("combine_features: mismatched segment ids '" + eda_fv.segment_id +
                    "' vs '" + ppg_fv.segment_id + "'");
    std::set<std::string> seen(eda_fv.names.begin(), eda_fv.names.end());
    FeatureVector out = eda_fv;
    if (out.segment_id.empty()) out.segment_id = ppg_fv.segment_id;
    for (std::size_t i = 0; i < ppg_fv.names.size(); ++i) {
        if (!seen.insert(ppg_fv.names[i]).second)
            throw Error("combine_features: duplicate feature name " + ppg_fv.names[i]);
        out.push(ppg_fv.names[i], ppg_fv.values[i]);
    }
    return out;
}

}  // namespace afb
