#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "affectbench/eval.hpp"
#include "affectbench/ingest.hpp"
#include "affectbench/types.hpp"

namespace afb {

/// Where one dataset's standardized files live, plus its descriptor+scheme
/// config (a single JSON document per dataset).
struct DatasetConfig {
    std::string id;
    std::string config_path;      // descriptor + binning scheme + segmentation mode
    std::string eda_signal_path;  // optional
    std::string ppg_signal_path;  // optional
    std::string annotation_path;
};

enum class ArtifactMode { Report, Exclude };

struct RunConfig {
    std::vector<DatasetConfig> datasets;
    std::vector<Modality> modalities = {Modality::EDA, Modality::PPG, Modality::Combined};
    std::vector<Task> tasks = {Task::ArousalTask, Task::ValenceTask};
    std::vector<std::string> models = {"rf", "lda", "mlp"};
    std::vector<Protocol> protocols = {Protocol::LOSO};
    std::vector<double> subsample_fractions;  // empty = full training data
    RebalancePolicy rebalance;
    std::vector<CohortDimension> cohort_dimensions;
    std::string out_dir = "out";
    std::uint64_t seed = 42;
    int workers = 1;
    ArtifactMode artifact_mode = ArtifactMode::Report;
};

struct DatasetSpecification {
    DatasetDescriptor descriptor;
    BinningScheme scheme;
    std::string segmentation = "task";  // task | hourly | prompt
};

RunConfig load_run_config(const std::string& path);

DatasetSpecification load_dataset_spec(const std::string& path);
std::string dataset_spec_to_json(const DatasetSpecification& spec);

}  // namespace afb
