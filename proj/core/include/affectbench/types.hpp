#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace afb {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Modality { EDA, PPG, Combined };
enum class Arousal { Low, High };
enum class Valence { Negative, Positive };
enum class Quadrant { HAPV, HANV, LAPV, LANV };

const char* to_string(Modality m);
const char* to_string(Arousal a);
const char* to_string(Valence v);
const char* to_string(Quadrant q);

Modality modality_from_string(const std::string& s);
Arousal arousal_from_string(const std::string& s);
Valence valence_from_string(const std::string& s);

/// The circumplex quadrant is a pure function of the binary pair.
Quadrant quadrant_of(Arousal a, Valence v);

struct LabelSet {
    Arousal arousal;
    Valence valence;
    Quadrant quadrant;

    static LabelSet make(Arousal a, Valence v) {
        return LabelSet{a, v, quadrant_of(a, v)};
    }
    bool operator==(const LabelSet&) const = default;
};

/// One participant's continuous EDA or PPG stream.
struct RawSignalRecord {
    std::string dataset_id;
    std::string participant_id;
    std::string recording_id;
    Modality modality = Modality::EDA;  // EDA or PPG only, never Combined
    double sampling_rate_hz = 0.0;
    std::vector<double> samples;
    std::optional<double> start_time_s;

    double duration_s() const {
        return sampling_rate_hz > 0 ? static_cast<double>(samples.size()) / sampling_rate_hz : 0.0;
    }
};

struct SegmentSlice {
    Modality modality = Modality::EDA;
    double sampling_rate_hz = 0.0;
    std::vector<double> samples;
};

struct Provenance {
    enum class Kind { Task, Hour, Prompt };
    Kind kind = Kind::Task;
    std::string task_name;        // Task
    int hour_index = 0;           // Hour
    double anchor_time_s = 0.0;   // Prompt

    static Provenance task(std::string name) { return {Kind::Task, std::move(name), 0, 0.0}; }
    static Provenance hour(int index) { return {Kind::Hour, {}, index, 0.0}; }
    static Provenance prompt(double anchor_s) { return {Kind::Prompt, {}, 0, anchor_s}; }
    std::string to_string() const;
};

/// Labeled signal slice cut from a participant's recording.
struct Segment {
    std::string segment_id;
    std::string dataset_id;
    std::string participant_id;
    std::vector<SegmentSlice> slices;  // at most one per modality
    std::optional<LabelSet> labels;
    Provenance provenance;

    const SegmentSlice* slice(Modality m) const {
        for (const auto& s : slices)
            if (s.modality == m) return &s;
        return nullptr;
    }
};

enum class Setting { Lab, Constraint, Real, LabReal };
enum class Device { WearableE4, LabDevice, CustomWearable };
enum class Labeling { StimulusLabel, SelfReport, ExpertAnnotated };
enum class Gender { Male, Female };

const char* to_string(Setting s);
const char* to_string(Device d);
const char* to_string(Labeling l);
const char* to_string(Gender g);
Setting setting_from_string(const std::string& s);
Device device_from_string(const std::string& s);
Labeling labeling_from_string(const std::string& s);
Gender gender_from_string(const std::string& s);

struct ParticipantInfo {
    std::string participant_id;
    std::optional<Gender> gender;
    std::optional<int> age_years;
};

struct DatasetDescriptor {
    std::string name;
    Setting setting = Setting::Lab;
    Device device = Device::LabDevice;
    Labeling labeling = Labeling::StimulusLabel;
    std::vector<ParticipantInfo> participants;
    std::map<Modality, double> sampling_rates;

    const ParticipantInfo* find_participant(const std::string& id) const {
        for (const auto& p : participants)
            if (p.participant_id == id) return &p;
        return nullptr;
    }
};

enum class CohortDimension { Setting, Device, Labeling, Gender, Age };
const char* to_string(CohortDimension d);
CohortDimension cohort_dimension_from_string(const std::string& s);

/// Participants aged exactly 25 count as Young (18-25 inclusive).
inline const char* age_group(int age_years) {
    return age_years <= 25 ? "Young" : "Old";
}

struct CohortGroup {
    CohortDimension dimension = CohortDimension::Setting;
    std::string value;
    std::set<std::string> datasets;
    // "dataset_id/participant_id" keys, used by the Gender and Age dimensions
    std::set<std::string> participants;

    bool demographic() const {
        return dimension == CohortDimension::Gender || dimension == CohortDimension::Age;
    }
};

struct Violation {
    std::string code;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks every record against the descriptor. Violations are data, not failures.
ValidationReport validate_corpus(const std::vector<RawSignalRecord>& records,
                                 const DatasetDescriptor& descriptor);

}  // namespace afb
