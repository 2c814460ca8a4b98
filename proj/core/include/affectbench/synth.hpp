#pragma once

#include <cstdint>
#include <vector>

#include "affectbench/ingest.hpp"
#include "affectbench/types.hpp"

namespace afb {

/// Parameters for the ground-truth-known synthetic corpus.
struct SynthSpec {
    int n_participants = 10;
    int segments_per_quadrant = 4;
    double segment_length_s = 120.0;
    double eda_rate_hz = 4.0;
    double ppg_rate_hz = 64.0;

    // arousal effects
    double scr_rate_high_per_min = 6.0;
    double scr_rate_low_per_min = 0.5;
    double hr_high_bpm = 90.0;
    double hr_low_bpm = 65.0;

    // valence effects, deliberately weaker than arousal
    double tonic_slope_uS_per_s = 0.002;       // sign follows valence
    double hrv_depth_positive_ms = 25.0;       // 0.1 Hz period modulation
    double hrv_depth_negative_ms = 10.0;

    double scr_amplitude_min_uS = 0.02;
    double scr_amplitude_max_uS = 0.1;
    double eda_noise_uS = 0.003;
    double ppg_noise = 0.05;
    double beat_jitter_s = 0.005;

    // per participant, step discontinuities injected into EDA for
    // artifact-screening exercises; 0 keeps the corpus clean
    int injected_steps_per_participant = 0;
    double injected_step_uS = 2.0;

    std::uint64_t seed = 42;

    void validate() const;
};

struct SynthCorpus {
    std::vector<RawSignalRecord> records;           // EDA + PPG per participant
    std::vector<AnnotationRecord> annotations;      // task intervals, true mapping
    DatasetDescriptor descriptor;
    BinningScheme scheme;                           // task name -> quadrant
};

/// Deterministic per seed; per-participant streams, so generation order
/// never changes the corpus.
SynthCorpus generate_corpus(const SynthSpec& spec);

}  // namespace afb
