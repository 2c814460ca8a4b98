#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "affectbench/types.hpp"

namespace afb {

inline constexpr std::size_t kArtifactWindowSamples = 60;

struct ArtifactFlagSeries {
    std::string participant_id;
    Modality modality = Modality::EDA;
    std::vector<bool> flags;  // true = artifact; one per non-overlapping 60-sample window
    std::vector<std::string> warnings;

    std::size_t artifact_count() const {
        std::size_t n = 0;
        for (bool f : flags) n += f;
        return n;
    }
};

struct ArtifactReport {
    std::map<std::string, double> participant_fractions;
    double mean_fraction = 0.0;
    double std_fraction = 0.0;  // population std across participants
};

/// Scores one 60-sample window given its 36-entry feature vector and the raw
/// window. Stateless; must return a value in [0, 1].
class EdaArtifactDetector {
public:
    virtual ~EdaArtifactDetector() = default;
    virtual double score(std::span<const double> features,
                         std::span<const double> window) const = 0;
};

/// Emits a per-sample artifact-probability mask for one 60-sample window.
class PpgArtifactDetector {
public:
    virtual ~PpgArtifactDetector() = default;
    virtual std::vector<double> mask(std::span<const double> window, double rate_hz) const = 0;
};

struct EdaRuleParams {
    double max_abs_first_diff_uS = 0.5;
    double min_conductance_uS = 0.01;
    double max_conductance_uS = 100.0;
    double haar_energy_ratio = 10.0;
};

/// Default rule-based stand-in for the pretrained EDA artifact classifier.
class RuleBasedEdaDetector : public EdaArtifactDetector {
public:
    explicit RuleBasedEdaDetector(EdaRuleParams params = {}) : params_(params) {}
    double score(std::span<const double> features,
                 std::span<const double> window) const override;

private:
    EdaRuleParams params_;
};

struct PpgRuleParams {
    double flatness_threshold = 0.6;
    double flatness_window_s = 1.0;
};

/// Default rule-based stand-in for the pretrained PPG motion-artifact network.
class RuleBasedPpgDetector : public PpgArtifactDetector {
public:
    explicit RuleBasedPpgDetector(PpgRuleParams params = {}) : params_(params) {}
    std::vector<double> mask(std::span<const double> window, double rate_hz) const override;

private:
    PpgRuleParams params_;
};

/// The 36-entry per-window feature vector of the EDA artifact pipeline.
std::vector<double> eda_artifact_features(std::span<const double> window, double rate_hz = 4.0);

/// Score non-overlapping 60-sample windows at a nominal 4 Hz (higher-rate
/// records are mean-decimated first); artifact iff score > 0.5.
ArtifactFlagSeries detect_eda_artifacts(const RawSignalRecord& record,
                                        const EdaArtifactDetector& detector);

/// Per-window mask binarized at 0.5; window flagged iff binarized mean > 0.5.
ArtifactFlagSeries detect_ppg_artifacts(const RawSignalRecord& record,
                                        const PpgArtifactDetector& detector);

/// Mean +- population std of per-participant artifact fractions.
ArtifactReport artifact_report(const std::vector<ArtifactFlagSeries>& series);

}  // namespace afb
