#include "affectbench/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <sstream>

#include "affectbench/csvio.hpp"

namespace afb {

static const std::vector<std::string> kSignalHeader = {"participant_id", "recording_id",
                                                       "t_s", "value"};
static const std::vector<std::string> kAnnotationHeader = {
    "participant_id", "kind",    "task",    "start_s",   "end_s",    "time_s",
    "arousal",        "valence", "scale_min", "scale_max", "tags"};

std::vector<RawSignalRecord> parse_signal_file(std::istream& in, Modality modality,
                                               const DatasetDescriptor& descriptor) {
    auto it = descriptor.sampling_rates.find(modality);
    if (it == descriptor.sampling_rates.end())
        throw Error(std::string("descriptor declares no sampling rate for ") +
                    to_string(modality));
    const double rate = it->second;
    const double dt = 1.0 / rate;

    std::vector<RawSignalRecord> records;
    RawSignalRecord* cur = nullptr;
    double prev_t = 0.0;
    for (const auto& row : read_csv(in, kSignalHeader)) {
        if (row.cells.size() != 4)
            throw Error("line " + std::to_string(row.line) + ": expected 4 cells");
        const std::string& pid = row.cells[0];
        const std::string& rid = row.cells[1];
        const double t = parse_number(row.cells[2], row.line);
        const double v = parse_number(row.cells[3], row.line);
        if (!cur || cur->participant_id != pid || cur->recording_id != rid) {
            records.push_back({descriptor.name, pid, rid, modality, rate, {}, t});
            cur = &records.back();
        } else {
            if (t <= prev_t)
                throw Error("line " + std::to_string(row.line) +
                            ": times not strictly increasing within recording " + rid);
            if (std::abs((t - prev_t) - dt) > 1e-6 * std::max(1.0, dt))
                throw Error("line " + std::to_string(row.line) +
                            ": sample spacing inconsistent with declared rate in recording " +
                            rid);
        }
        cur->samples.push_back(v);
        prev_t = t;
    }
    return records;
}

static std::vector<std::string> split_tags(const std::string& cell) {
    std::vector<std::string> tags;
    std::string cur;
    for (char c : cell) {
        if (c == ';') {
            if (!cur.empty()) tags.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) tags.push_back(cur);
    return tags;
}

std::vector<AnnotationRecord> parse_annotation_file(std::istream& in) {
    std::vector<AnnotationRecord> out;
    AnnotationRecord* open_trace = nullptr;
    for (const auto& row : read_csv(in, kAnnotationHeader)) {
        if (row.cells.size() != 11)
            throw Error("line " + std::to_string(row.line) + ": expected 11 cells");
        const std::string& pid = row.cells[0];
        const std::string& kind = row.cells[1];
        if (kind == "task_interval") {
            AnnotationRecord a;
            a.participant_id = pid;
            a.kind = AnnotationRecord::Kind::TaskInterval;
            a.task = row.cells[2];
            a.start_s = parse_number(row.cells[3], row.line);
            a.end_s = parse_number(row.cells[4], row.line);
            if (!(a.end_s > a.start_s))
                throw Error("line " + std::to_string(row.line) + ": interval end <= start");
            out.push_back(std::move(a));
            open_trace = nullptr;
        } else if (kind == "continuous_rating") {
            const double t = parse_number(row.cells[5], row.line);
            const double ar = parse_number(row.cells[6], row.line);
            const double va = parse_number(row.cells[7], row.line);
            const double lo = parse_number(row.cells[8], row.line);
            const double hi = parse_number(row.cells[9], row.line);
            if (ar < lo || ar > hi || va < lo || va > hi)
                throw Error("line " + std::to_string(row.line) + ": rating outside scale");
            if (!open_trace || open_trace->participant_id != pid) {
                AnnotationRecord a;
                a.participant_id = pid;
                a.kind = AnnotationRecord::Kind::ContinuousRating;
                a.scale_min = lo;
                a.scale_max = hi;
                out.push_back(std::move(a));
                open_trace = &out.back();
            }
            if (!open_trace->times_s.empty() && t < open_trace->times_s.back())
                throw Error("line " + std::to_string(row.line) +
                            ": continuous rating times not nondecreasing");
            open_trace->times_s.push_back(t);
            open_trace->arousal_values.push_back(ar);
            open_trace->valence_values.push_back(va);
        } else if (kind == "discrete_rating") {
            AnnotationRecord a;
            a.participant_id = pid;
            a.kind = AnnotationRecord::Kind::DiscreteRating;
            a.task = row.cells[2];
            if (!row.cells[5].empty()) a.time_s = parse_number(row.cells[5], row.line);
            a.arousal_value = parse_number(row.cells[6], row.line);
            a.valence_value = parse_number(row.cells[7], row.line);
            a.scale_min = parse_number(row.cells[8], row.line);
            a.scale_max = parse_number(row.cells[9], row.line);
            out.push_back(std::move(a));
            open_trace = nullptr;
        } else if (kind == "event_flag") {
            AnnotationRecord a;
            a.participant_id = pid;
            a.kind = AnnotationRecord::Kind::EventFlag;
            a.time_s = parse_number(row.cells[5], row.line);
            a.tags = split_tags(row.cells[10]);
            out.push_back(std::move(a));
            open_trace = nullptr;
        } else {
            throw Error("line " + std::to_string(row.line) + ": unknown annotation kind '" +
                        kind + "'");
        }
    }
    return out;
}

static Segment slice_record(const RawSignalRecord& record, size_t i0, size_t i1,
                            Provenance prov) {
    Segment seg;
    seg.segment_id = record.participant_id + "|" + prov.to_string();
    seg.dataset_id = record.dataset_id;
    seg.participant_id = record.participant_id;
    seg.provenance = prov;
    SegmentSlice s;
    s.modality = record.modality;
    s.sampling_rate_hz = record.sampling_rate_hz;
    s.samples.assign(record.samples.begin() + static_cast<long>(i0),
                     record.samples.begin() + static_cast<long>(i1));
    seg.slices.push_back(std::move(s));
    return seg;
}

SegmentationResult segment_by_task(const RawSignalRecord& record,
                                   const std::vector<AnnotationRecord>& annotations) {
    SegmentationResult result;
    const double t0 = record.start_time_s.value_or(0.0);
    const double rate = record.sampling_rate_hz;
    const size_t n = record.samples.size();
    for (const auto& a : annotations) {
        if (a.kind != AnnotationRecord::Kind::TaskInterval) continue;
        if (a.participant_id != record.participant_id) continue;
        const long i0 = std::lround((a.start_s - t0) * rate);
        const long i1 = std::lround((a.end_s - t0) * rate);
        if (i0 < 0 || i1 > static_cast<long>(n)) {
            result.warnings.push_back(
                {record.participant_id, "interval [" + std::to_string(a.start_s) + ", " +
                                            std::to_string(a.end_s) +
                                            ") outside recorded range, skipped"});
            continue;
        }
        if (i1 <= i0) {
            result.warnings.push_back(
                {record.participant_id, "zero-length slice for task '" + a.task + "', skipped"});
            continue;
        }
        result.segments.push_back(slice_record(record, static_cast<size_t>(i0),
                                               static_cast<size_t>(i1),
                                               Provenance::task(a.task)));
    }
    return result;
}

std::vector<Segment> segment_hourly(const RawSignalRecord& record, double partial_floor_s) {
    std::vector<Segment> out;
    const double rate = record.sampling_rate_hz;
    const size_t per_hour = static_cast<size_t>(std::lround(3600.0 * rate));
    const size_t n = record.samples.size();
    size_t start = 0;
    int hour = 0;
    while (start + per_hour <= n) {
        out.push_back(slice_record(record, start, start + per_hour, Provenance::hour(hour)));
        start += per_hour;
        ++hour;
    }
    const size_t rest = n - start;
    if (rest > 0 && static_cast<double>(rest) / rate >= partial_floor_s)
        out.push_back(slice_record(record, start, n, Provenance::hour(hour)));
    return out;
}

Segment segment_around_prompt(const RawSignalRecord& record, double prompt_time_s,
                              double pre_s, double post_s) {
    const double t0 = record.start_time_s.value_or(0.0);
    const double rate = record.sampling_rate_hz;
    const long n = static_cast<long>(record.samples.size());
    const long lo = std::max(0L, std::lround((prompt_time_s - t0 - pre_s) * rate));
    const long hi = std::min(n, std::lround((prompt_time_s - t0 + post_s) * rate));
    if (hi <= lo) throw Error("prompt outside recording");
    return slice_record(record, static_cast<size_t>(lo), static_cast<size_t>(hi),
                        Provenance::prompt(prompt_time_s));
}

LabelSet bin_discrete_rating(const AnnotationRecord& rating, const BinningScheme&) {
    if (rating.arousal_value < rating.scale_min || rating.arousal_value > rating.scale_max ||
        rating.valence_value < rating.scale_min || rating.valence_value > rating.scale_max)
        throw Error("rating outside scale bounds");
    const double mid = 0.5 * (rating.scale_min + rating.scale_max);
    const Arousal a = rating.arousal_value > mid ? Arousal::High : Arousal::Low;
    const Valence v = rating.valence_value > mid ? Valence::Positive : Valence::Negative;
    return LabelSet::make(a, v);
}

LabelSet bin_continuous_rating(const AnnotationRecord& trace, const BinningScheme&,
                               double arousal_reference_mean, double valence_reference_mean) {
    if (trace.arousal_values.empty() || trace.valence_values.empty())
        throw Error("empty rating trace");
    const auto mean = [](const std::vector<double>& xs) {
        return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    };
    const Arousal a = mean(trace.arousal_values) > arousal_reference_mean ? Arousal::High
                                                                          : Arousal::Low;
    const Valence v = mean(trace.valence_values) > valence_reference_mean ? Valence::Positive
                                                                          : Valence::Negative;
    return LabelSet::make(a, v);
}

LabelSet bin_task_label(const std::string& task_name, const BinningScheme& scheme) {
    const BinRule* rule = scheme.match(task_name);
    if (!rule) throw Error("unmapped task '" + task_name + "' under scheme " + scheme.name);
    return LabelSet::make(rule->arousal, rule->valence);
}

std::vector<Segment> merge_segments(const std::vector<Segment>& segments) {
    std::map<std::string, Segment> merged;
    for (const auto& seg : segments) {
        auto [it, fresh] = merged.try_emplace(seg.segment_id, seg);
        if (fresh) continue;
        Segment& dst = it->second;
        for (const auto& s : seg.slices)
            if (!dst.slice(s.modality)) dst.slices.push_back(s);
        if (!dst.labels && seg.labels) dst.labels = seg.labels;
    }
    std::vector<Segment> out;
    out.reserve(merged.size());
    for (auto& [id, seg] : merged) {
        std::sort(seg.slices.begin(), seg.slices.end(),
                  [](const SegmentSlice& a, const SegmentSlice& b) {
                      return static_cast<int>(a.modality) < static_cast<int>(b.modality);
                  });
        out.push_back(std::move(seg));
    }
    return out;
}

}  // namespace afb
