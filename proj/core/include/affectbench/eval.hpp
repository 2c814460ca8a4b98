#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "affectbench/models.hpp"
#include "affectbench/preprocess.hpp"

namespace afb {

struct Fold {
    std::set<std::string> train_participants;
    std::set<std::string> test_participants;
    std::string protocol;
};

enum class Protocol { LOSO, SplitSwap };
const char* to_string(Protocol p);

struct FoldMetrics {
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    Eigen::MatrixXi confusion;  // true class x predicted class
    std::size_t test_rows = 0;
};

struct EvalResult {
    std::vector<std::string> datasets;
    Modality modality = Modality::EDA;
    Task task = Task::ArousalTask;
    std::string model_kind;
    std::string protocol;
    std::string train_cohort;  // cohort runs only
    std::string test_cohort;

    std::vector<Fold> fold_defs;
    std::vector<FoldMetrics> folds;
    double mean_accuracy = 0.0, std_accuracy = 0.0;
    double mean_f1 = 0.0, std_f1 = 0.0;
    std::vector<std::string> warnings;
    std::uint64_t seed = 42;
};

struct RebalancePolicy {
    bool oversample = true;
    bool smote_if_imbalanced = true;
    int smote_k = 5;
};

double accuracy_score(const std::vector<int>& y_true, const std::vector<int>& y_pred);

/// Macro F1: unweighted mean of per-class F1 over classes present in either
/// vector; empty-denominator classes score 0.
double f1_score(const std::vector<int>& y_true, const std::vector<int>& y_pred);

Eigen::MatrixXi confusion_matrix(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                                 int n_classes);

/// One fold per participant; fold i tests participant i.
std::vector<Fold> loso_folds(const std::vector<std::string>& participants);

/// Shuffled halves with roles swapped; odd counts put the extra participant
/// in the first half.
std::vector<Fold> split_swap_folds(const std::vector<std::string>& participants,
                                   std::uint64_t seed);

/// Per class, ceil(fraction * count) rows without replacement.
FeatureTable subsample_regime(const FeatureTable& train_rows, Task task, double fraction,
                              std::uint64_t seed);

/// Protocol driver: per fold, rebalance the training rows only, train,
/// score the untouched test rows.
EvalResult run_benchmark(const FeatureTable& features, Modality modality, Task task,
                         const ModelSpec& model_spec, Protocol protocol,
                         const RebalancePolicy& policy = {}, std::uint64_t seed = 42,
                         double subsample_fraction = 0.0);

/// Pooled transfer: one model trained on the train cohort, evaluated on the
/// disjoint test cohort. Features are per-participant min-max normalized
/// before pooling.
EvalResult cross_cohort_eval(const FeatureTable& features, const CohortGroup& train_group,
                             const CohortGroup& test_group, Modality modality, Task task,
                             const ModelSpec& model_spec, const RebalancePolicy& policy = {},
                             std::uint64_t seed = 42);

/// Leave-one-dataset-out within a cohort group.
std::vector<EvalResult> lodo_eval(const FeatureTable& features, const CohortGroup& group,
                                  Modality modality, Task task, const ModelSpec& model_spec,
                                  const RebalancePolicy& policy = {}, std::uint64_t seed = 42);

struct RankingEntry {
    std::string dataset;
    std::string best_model;
    double best_f1 = 0.0;
};

struct RankingTable {
    Task task = Task::ArousalTask;
    Modality modality = Modality::EDA;
    std::vector<RankingEntry> entries;  // ranked by best F1 descending
    double min_f1 = 0.0, max_f1 = 0.0, avg_f1 = 0.0, std_f1 = 0.0;
};

/// Per (task, modality): best model per dataset, datasets ranked by best F1,
/// MIN/MAX/AVG/STD summary. Ties break by model name then dataset name.
std::vector<RankingTable> rank_results(const std::vector<EvalResult>& results);

std::string render_ranking(const RankingTable& table);

}  // namespace afb
