#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "affectbench/types.hpp"

namespace afb {

enum class Task { ArousalTask, ValenceTask, QuadrantTask };
const char* to_string(Task t);
Task task_from_string(const std::string& s);

inline int n_classes(Task t) { return t == Task::QuadrantTask ? 4 : 2; }

inline int label_of(const LabelSet& l, Task t) {
    switch (t) {
        case Task::ArousalTask: return l.arousal == Arousal::High ? 1 : 0;
        case Task::ValenceTask: return l.valence == Valence::Positive ? 1 : 0;
        case Task::QuadrantTask: return static_cast<int>(l.quadrant);
    }
    return 0;
}

struct Window {
    std::string segment_id;
    int window_index = 0;
    std::size_t start_sample = 0;
    std::vector<double> samples;
    Modality modality = Modality::EDA;
    bool padded = false;
};

/// Sliding windows at stride window_size*(1-overlap). Inputs shorter than one
/// window yield a single zero-padded flagged window.
std::vector<Window> window_signal(std::span<const double> samples, std::size_t window_size = 60,
                                  double overlap_fraction = 0.5);

struct FeatureRow {
    std::string dataset_id;
    std::string participant_id;
    std::string segment_id;
    std::vector<double> values;  // aligned with FeatureTable::columns
    LabelSet labels = LabelSet::make(Arousal::Low, Valence::Negative);
};

struct FeatureTable {
    std::vector<std::string> columns;
    std::vector<FeatureRow> rows;

    int column_index(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        return -1;
    }
};

/// Per-participant median imputation of non-finite entries, falling back to 0
/// when the participant has no finite value in that column.
FeatureTable impute_features(const FeatureTable& table);

/// Per (participant, column) min-max to [0, 1]; constant columns map to 0.
FeatureTable minmax_normalize(const FeatureTable& table);

/// Per-participant standardization to mean 0, population std 1.
/// Constant signals map to all zeros.
std::vector<double> zscore_normalize(std::span<const double> samples);

/// True iff (max_count - min_count) / max_count > 1/3, strictly.
bool imbalance_exceeds_one_third(const std::vector<int>& labels);

/// Duplicate minority rows uniformly at random until class counts equal.
FeatureTable random_oversample(const FeatureTable& table, Task task, std::uint64_t seed);

/// SMOTE: synthetic minority rows interpolated toward one of the k nearest
/// minority neighbors. Minority below 2 rows falls back to random oversampling.
FeatureTable smote(const FeatureTable& table, Task task, int k = 5, std::uint64_t seed = 42);

void write_feature_table(std::ostream& out, const FeatureTable& table);
FeatureTable read_feature_table(std::istream& in);

}  // namespace afb
