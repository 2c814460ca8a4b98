#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "affectbench/artifacts.hpp"
#include "affectbench/config.hpp"
#include "affectbench/eval.hpp"
#include "affectbench/synth.hpp"

namespace afb {

struct LoadedDataset {
    DatasetSpecification spec;
    std::vector<RawSignalRecord> records;
    std::vector<AnnotationRecord> annotations;
};

LoadedDataset load_dataset(const DatasetConfig& config);

struct SegmentStore {
    std::vector<Segment> segments;
    std::vector<std::string> warnings;
};

/// Segmentation per the dataset's declared mode, merged across modalities,
/// labeled through the binning scheme.
SegmentStore build_segments(const LoadedDataset& dataset);

/// One feature row per labeled segment. Values may be NaN before imputation.
/// ArtifactMode::Exclude drops segments with any flagged artifact window.
FeatureTable extract_feature_table(const std::vector<Segment>& segments, Modality modality,
                                   ArtifactMode mode = ArtifactMode::Report);

/// Imputation followed by participant-wise min-max, the standard table prep.
FeatureTable finalize_feature_table(const FeatureTable& raw);

struct QualityRow {
    std::string dataset;
    std::map<std::string, std::size_t> arousal_counts;
    std::map<std::string, std::size_t> valence_counts;
    std::map<std::string, std::size_t> quadrant_counts;
    ArtifactReport eda;
    ArtifactReport ppg;
};

QualityRow quality_report(const LoadedDataset& dataset, const SegmentStore& store);
std::string render_quality(const std::vector<QualityRow>& rows);

struct BenchOutput {
    std::vector<EvalResult> results;
    std::vector<RankingTable> rankings;
    std::vector<std::string> cell_errors;
};

/// The full (dataset x modality x task x model x protocol) grid over
/// finalized tables keyed by modality.
BenchOutput run_full_benchmark(const std::map<Modality, FeatureTable>& tables,
                               const RunConfig& config);

/// Cohort groups along one dimension, built from the dataset specs.
std::vector<CohortGroup> build_cohort_groups(const std::vector<DatasetSpecification>& specs,
                                             CohortDimension dimension);

/// All ordered disjoint group pairs plus LODO within each multi-dataset group.
std::vector<EvalResult> run_cross_matrix(const FeatureTable& features,
                                         const std::vector<CohortGroup>& groups,
                                         Modality modality, Task task,
                                         const ModelSpec& model_spec,
                                         const RebalancePolicy& policy, std::uint64_t seed,
                                         std::vector<std::string>* errors = nullptr);

std::string results_to_json(const std::vector<EvalResult>& results);

// ---- standardized file emission (the synth corpus exercises the real path) ----

void write_signal_file(std::ostream& out, const std::vector<RawSignalRecord>& records);
void write_annotation_file(std::ostream& out, const std::vector<AnnotationRecord>& annotations);

/// Writes eda.csv, ppg.csv, annotations.csv, dataset.json into `dir` and
/// returns the DatasetConfig pointing at them.
DatasetConfig write_corpus_files(const SynthCorpus& corpus, const std::string& dir);

void write_segment_manifest(std::ostream& out, const SegmentStore& store);

}  // namespace afb
