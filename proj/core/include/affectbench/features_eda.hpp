#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "affectbench/feature_registry.hpp"

namespace afb {

/// One detected skin conductance response.
struct SCREvent {
    std::size_t onset_index = 0;
    std::size_t peak_index = 0;
    double amplitude_uS = 0.0;
    double rise_time_s = 0.0;
    std::optional<double> half_recovery_time_s;
};

struct ScrDetectionParams {
    double min_amplitude_uS = 0.01;
    double pre_apex_search_s = 3.0;
    double half_recovery_window_s = 10.0;
    int onset_validation_offset = 1;
};

/// Split EDA into tonic and phasic via a zero-phase first-order 0.05 Hz
/// high-pass. tonic + phasic reconstructs the input exactly.
std::pair<std::vector<double>, std::vector<double>> decompose_eda(std::span<const double> samples,
                                                                  double rate_hz);

std::vector<SCREvent> detect_scr_peaks(std::span<const double> phasic, double rate_hz,
                                       const ScrDetectionParams& params = {});

/// The 15 named EDA features of the handcrafted set.
FeatureVector eda_features(std::span<const double> samples, double rate_hz);

}  // namespace afb
