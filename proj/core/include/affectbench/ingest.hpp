#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "affectbench/types.hpp"

namespace afb {

struct AnnotationRecord {
    enum class Kind { TaskInterval, ContinuousRating, DiscreteRating, EventFlag };

    std::string participant_id;
    Kind kind = Kind::TaskInterval;

    // TaskInterval
    std::string task;
    double start_s = 0.0;
    double end_s = 0.0;

    // ContinuousRating: parallel traces, nondecreasing times
    std::vector<double> times_s;
    std::vector<double> arousal_values;
    std::vector<double> valence_values;

    // DiscreteRating: one rating anchored at a time or a task name
    double time_s = 0.0;
    double arousal_value = 0.0;
    double valence_value = 0.0;

    double scale_min = 0.0;
    double scale_max = 0.0;

    // EventFlag
    std::vector<std::string> tags;
};

struct BinRule {
    std::string task_pattern;  // exact task name, or "*" catch-all
    Arousal arousal = Arousal::Low;
    Valence valence = Valence::Negative;
};

/// Ordered first-match-wins mapping from a dataset's task vocabulary to labels.
struct BinningScheme {
    std::string name;
    std::vector<BinRule> rules;

    const BinRule* match(const std::string& task_name) const {
        for (const auto& r : rules)
            if (r.task_pattern == task_name || r.task_pattern == "*") return &r;
        return nullptr;
    }
};

struct SegmentationWarning {
    std::string participant_id;
    std::string detail;
};

struct SegmentationResult {
    std::vector<Segment> segments;
    std::vector<SegmentationWarning> warnings;
};

/// Parse a long-format signal file: header `participant_id,recording_id,t_s,value`.
/// One record per (participant, contiguous recording); sampling rate taken from
/// the descriptor, spacing verified against it.
std::vector<RawSignalRecord> parse_signal_file(std::istream& in, Modality modality,
                                               const DatasetDescriptor& descriptor);

/// Parse the annotation file; consecutive continuous-rating rows for one
/// participant are grouped into a single trace record.
std::vector<AnnotationRecord> parse_annotation_file(std::istream& in);

/// One segment per TaskInterval; half-open slice [start_s, end_s) at the
/// record's rate. Out-of-range or empty intervals are skipped with a warning.
SegmentationResult segment_by_task(const RawSignalRecord& record,
                                   const std::vector<AnnotationRecord>& annotations);

/// Consecutive non-overlapping 3600 s slices; a final partial slice is kept
/// iff it spans at least `partial_floor_s` seconds.
std::vector<Segment> segment_hourly(const RawSignalRecord& record,
                                    double partial_floor_s = 300.0);

/// Slice [prompt - 7200 s, prompt + 900 s) intersected with the recording.
Segment segment_around_prompt(const RawSignalRecord& record, double prompt_time_s,
                              double pre_s = 7200.0, double post_s = 900.0);

/// High iff rating strictly exceeds the scale midpoint; ties go Low/Negative.
LabelSet bin_discrete_rating(const AnnotationRecord& rating, const BinningScheme& scheme);

/// Segment trace mean vs. the participant's reference mean; above goes
/// High/Positive, at-or-below goes Low/Negative.
LabelSet bin_continuous_rating(const AnnotationRecord& trace, const BinningScheme& scheme,
                               double arousal_reference_mean, double valence_reference_mean);

/// First matching scheme rule; schemes must be total over the task vocabulary.
LabelSet bin_task_label(const std::string& task_name, const BinningScheme& scheme);

/// Merge single-slice segments that share (participant, provenance) into
/// multi-modality segments, deterministically ordered by segment id.
std::vector<Segment> merge_segments(const std::vector<Segment>& segments);

}  // namespace afb
