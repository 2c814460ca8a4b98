#include "affectbench/types.hpp"

#include <cmath>

namespace afb {

const char* to_string(Modality m) {
    switch (m) {
        case Modality::EDA: return "eda";
        case Modality::PPG: return "ppg";
        case Modality::Combined: return "combined";
    }
    return "?";
}

const char* to_string(Arousal a) { return a == Arousal::Low ? "low" : "high"; }
const char* to_string(Valence v) { return v == Valence::Negative ? "negative" : "positive"; }

const char* to_string(Quadrant q) {
    switch (q) {
        case Quadrant::HAPV: return "HAPV";
        case Quadrant::HANV: return "HANV";
        case Quadrant::LAPV: return "LAPV";
        case Quadrant::LANV: return "LANV";
    }
    return "?";
}

Modality modality_from_string(const std::string& s) {
    if (s == "eda") return Modality::EDA;
    if (s == "ppg") return Modality::PPG;
    if (s == "combined") return Modality::Combined;
    throw Error("unknown modality: " + s);
}

Arousal arousal_from_string(const std::string& s) {
    if (s == "low") return Arousal::Low;
    if (s == "high") return Arousal::High;
    throw Error("unknown arousal label: " + s);
}

Valence valence_from_string(const std::string& s) {
    if (s == "negative") return Valence::Negative;
    if (s == "positive") return Valence::Positive;
    throw Error("unknown valence label: " + s);
}

Quadrant quadrant_of(Arousal a, Valence v) {
    if (a == Arousal::High)
        return v == Valence::Positive ? Quadrant::HAPV : Quadrant::HANV;
    return v == Valence::Positive ? Quadrant::LAPV : Quadrant::LANV;
}

std::string Provenance::to_string() const {
    switch (kind) {
        case Kind::Task: return "task:" + task_name;
        case Kind::Hour: return "hour:" + std::to_string(hour_index);
        case Kind::Prompt: return "prompt:" + std::to_string(anchor_time_s);
    }
    return "?";
}

const char* to_string(Setting s) {
    switch (s) {
        case Setting::Lab: return "lab";
        case Setting::Constraint: return "constraint";
        case Setting::Real: return "real";
        case Setting::LabReal: return "labreal";
    }
    return "?";
}

const char* to_string(Device d) {
    switch (d) {
        case Device::WearableE4: return "wearable_e4";
        case Device::LabDevice: return "lab_device";
        case Device::CustomWearable: return "custom_wearable";
    }
    return "?";
}

const char* to_string(Labeling l) {
    switch (l) {
        case Labeling::StimulusLabel: return "stimulus_label";
        case Labeling::SelfReport: return "self_report";
        case Labeling::ExpertAnnotated: return "expert_annotated";
    }
    return "?";
}

const char* to_string(Gender g) { return g == Gender::Male ? "male" : "female"; }

Setting setting_from_string(const std::string& s) {
    if (s == "lab") return Setting::Lab;
    if (s == "constraint") return Setting::Constraint;
    if (s == "real") return Setting::Real;
    if (s == "labreal") return Setting::LabReal;
    throw Error("unknown setting: " + s);
}

Device device_from_string(const std::string& s) {
    if (s == "wearable_e4") return Device::WearableE4;
    if (s == "lab_device") return Device::LabDevice;
    if (s == "custom_wearable") return Device::CustomWearable;
    throw Error("unknown device: " + s);
}

Labeling labeling_from_string(const std::string& s) {
    if (s == "stimulus_label") return Labeling::StimulusLabel;
    if (s == "self_report") return Labeling::SelfReport;
    if (s == "expert_annotated") return Labeling::ExpertAnnotated;
    throw Error("unknown labeling: " + s);
}

Gender gender_from_string(const std::string& s) {
    if (s == "male") return Gender::Male;
    if (s == "female") return Gender::Female;
    throw Error("unknown gender: " + s);
}

const char* to_string(CohortDimension d) {
    switch (d) {
        case CohortDimension::Setting: return "setting";
        case CohortDimension::Device: return "device";
        case CohortDimension::Labeling: return "labeling";
        case CohortDimension::Gender: return "gender";
        case CohortDimension::Age: return "age";
    }
    return "?";
}

CohortDimension cohort_dimension_from_string(const std::string& s) {
    if (s == "setting") return CohortDimension::Setting;
    if (s == "device") return CohortDimension::Device;
    if (s == "labeling") return CohortDimension::Labeling;
    if (s == "gender") return CohortDimension::Gender;
    if (s == "age") return CohortDimension::Age;
    throw Error("unknown cohort dimension: " + s);
}

ValidationReport validate_corpus(const std::vector<RawSignalRecord>& records,
                                 const DatasetDescriptor& descriptor) {
    ValidationReport report;
    for (const auto& r : records) {
        const std::string where =
            r.dataset_id + "/" + r.participant_id + "/" + r.recording_id;
        if (!descriptor.find_participant(r.participant_id))
            report.violations.push_back({"unknown participant", where});
        if (!(r.sampling_rate_hz > 0))
            report.violations.push_back({"nonpositive rate", where});
        if (r.samples.empty())
            report.violations.push_back({"empty stream", where});
        if (r.modality == Modality::Combined)
            report.violations.push_back({"combined modality on raw stream", where});
        for (double x : r.samples) {
            if (!std::isfinite(x)) {
                report.violations.push_back({"non-finite sample", where});
                break;
            }
        }
    }
    return report;
}

}  // namespace afb
