#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "affectbench/feature_registry.hpp"

namespace afb {

/// NN intervals surviving the physiological gate, in milliseconds.
struct IBISeries {
    std::vector<double> nn_intervals_ms;
    std::vector<double> peak_times_s;
};

/// Zero-phase 0.5-8 Hz band-pass, order 3. Requires rate >= 16 Hz.
std::vector<double> clean_ppg(std::span<const double> samples, double rate_hz);

/// Local maxima above a centered 2 s moving mean, minimum inter-peak
/// distance 0.33 s, larger peak wins.
std::vector<std::size_t> detect_ppg_peaks(std::span<const double> cleaned, double rate_hz);

/// Successive peak intervals gated to [300, 2000] ms; out-of-gate intervals
/// dropped. Throws when fewer than 2 intervals survive.
IBISeries ibi_series(std::span<const std::size_t> peaks, double rate_hz);

/// Named HRV features. Requires >= 8 intervals; frequency-band entries are
/// emitted as NaN (for downstream imputation) when the series spans < 60 s.
FeatureVector hrv_features(const IBISeries& nn);

/// Full PPG pipeline for one segment: clean, detect, gate, extract.
/// Reserved registry columns are appended as NaN. On an unusable segment
/// every value is NaN so imputation can fill the row.
FeatureVector ppg_features(std::span<const double> samples, double rate_hz);

}  // namespace afb
