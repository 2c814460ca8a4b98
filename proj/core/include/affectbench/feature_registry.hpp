#pragma once

#include <string>
#include <vector>

#include "affectbench/types.hpp"

namespace afb {

struct FeatureVector {
    std::string segment_id;
    std::vector<std::string> names;
    std::vector<double> values;

    void push(std::string name, double value) {
        names.push_back(std::move(name));
        values.push_back(value);
    }
    std::size_t size() const { return names.size(); }
    double at(const std::string& name) const;
    bool has(const std::string& name) const;
};

namespace registry {

/// The 15 EDA columns, in emission order.
const std::vector<std::string>& eda_feature_names();

/// HRV columns with extractors behind them, in emission order.
const std::vector<std::string>& hrv_feature_names();

/// HRV columns reserved in the registry without an extractor; they are
/// emitted as missing and filled by imputation.
const std::vector<std::string>& hrv_reserved_names();

/// Full column list for a modality (reserved columns included on request).
std::vector<std::string> columns_for(Modality modality, bool include_reserved = true);

}  // namespace registry

/// Name-disjoint concatenation, EDA columns first. Both inputs must come from
/// the same segment.
FeatureVector combine_features(const FeatureVector& eda_fv, const FeatureVector& ppg_fv);

}  // namespace afb
