#include "affectbench/artifacts.hpp"

#include <algorithm>
#include <cmath>

#include "affectbench/dsp.hpp"
#include "affectbench/features_eda.hpp"
#include "affectbench/features_ppg.hpp"

namespace afb {

namespace {

// Indices into the 36-entry vector used by the rule-based detector.
constexpr std::size_t kIdxD1MaxAbs = 8;
constexpr std::size_t kIdxHaar1Energy = 19;
constexpr std::size_t kIdxApproxEnergy = 30;

void push_diff_stats(std::vector<double>& out, const std::vector<double>& d) {
    out.push_back(dsp::mean(d));
    out.push_back(dsp::stddev(d));
    double max_abs = 0.0;
    for (double v : d) max_abs = std::max(max_abs, std::abs(v));
    out.push_back(max_abs);
    out.push_back(dsp::skewness(d));
    out.push_back(dsp::excess_kurtosis(d));
}

}  // namespace

std::vector<double> eda_artifact_features(std::span<const double> window, double rate_hz) {
    if (window.size() != kArtifactWindowSamples)
        throw Error("eda_artifact_features: expected exactly 60 samples");

    std::vector<double> f;
    f.reserve(36);

    // signal stats
    const auto [lo_it, hi_it] = std::minmax_element(window.begin(), window.end());
    f.push_back(dsp::mean(window));
    f.push_back(dsp::variance(window));
    f.push_back(dsp::skewness(window));
    f.push_back(dsp::excess_kurtosis(window));
    f.push_back(*hi_it - *lo_it);
    f.push_back(dsp::linear_slope(window, rate_hz));

    // first- and second-difference stats
    std::vector<double> d1, d2;
    for (std::size_t i = 1; i < window.size(); ++i) d1.push_back(window[i] - window[i - 1]);
    for (std::size_t i = 1; i < d1.size(); ++i) d2.push_back(d1[i] - d1[i - 1]);
    push_diff_stats(f, d1);
    push_diff_stats(f, d2);

    // Haar detail stats, levels 1-3, plus level-3 approximation stats
    const auto levels = dsp::haar_dwt(window, 3);
    for (int lvl = 0; lvl < 3; ++lvl) {
        const auto& detail = levels[static_cast<std::size_t>(lvl)].detail;
        double mean_abs = 0.0, max_abs = 0.0, energy = 0.0;
        for (double v : detail) {
            mean_abs += std::abs(v);
            max_abs = std::max(max_abs, std::abs(v));
            energy += v * v;
        }
        if (!detail.empty()) mean_abs /= static_cast<double>(detail.size());
        f.push_back(mean_abs);
        f.push_back(dsp::stddev(detail));
        f.push_back(max_abs);
        f.push_back(energy);
    }
    const auto& approx = levels[2].approx;
    double approx_energy = 0.0;
    for (double v : approx) approx_energy += v * v;
    f.push_back(dsp::mean(approx));
    f.push_back(dsp::stddev(approx));
    f.push_back(approx_energy);

    // SCR-peak features on the window
    const auto decomposed = decompose_eda(window, rate_hz);
    const auto events = detect_scr_peaks(decomposed.second, rate_hz);
    double sum_amp = 0.0, max_rise_slope = 0.0;
    std::size_t recoveries = 0;
    for (const auto& ev : events) {
        sum_amp += ev.amplitude_uS;
        if (ev.rise_time_s > 0.0)
            max_rise_slope = std::max(max_rise_slope, ev.amplitude_uS / ev.rise_time_s);
        if (ev.half_recovery_time_s) ++recoveries;
    }
    f.push_back(static_cast<double>(events.size()));
    f.push_back(events.empty() ? 0.0 : sum_amp / static_cast<double>(events.size()));
    f.push_back(sum_amp);
    f.push_back(max_rise_slope);
    f.push_back(static_cast<double>(recoveries));

    return f;
}

double RuleBasedEdaDetector::score(std::span<const double> features,
                                   std::span<const double> window) const {
    if (features[kIdxD1MaxAbs] > params_.max_abs_first_diff_uS) return 1.0;
    for (double v : window)
        if (v < params_.min_conductance_uS || v > params_.max_conductance_uS) return 1.0;
    const double approx_energy = features[kIdxApproxEnergy];
    if (features[kIdxHaar1Energy] > params_.haar_energy_ratio * approx_energy &&
        features[kIdxHaar1Energy] > 0.0)
        return 1.0;
    return 0.0;
}

std::vector<double> RuleBasedPpgDetector::mask(std::span<const double> window,
                                               double rate_hz) const {
    const std::size_t n = window.size();
    std::vector<double> cleaned;
    if (rate_hz >= 16.0) {
        cleaned = clean_ppg(window, rate_hz);
    } else {
        cleaned.assign(window.begin(), window.end());
    }
    const auto peaks = detect_ppg_peaks(cleaned, rate_hz);
    if (peaks.empty()) return std::vector<double>(n, 1.0);

    std::vector<double> mask(n, 0.0);
    const std::size_t halfw = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(0.5 * params_.flatness_window_s * rate_hz)));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i > halfw ? i - halfw : 0;
        const std::size_t hi = std::min(n, i + halfw + 1);
        const double flat = dsp::spectral_flatness(
            std::span<const double>(cleaned.data() + lo, hi - lo));
        if (flat > params_.flatness_threshold) mask[i] = 1.0;
    }
    return mask;
}

ArtifactFlagSeries detect_eda_artifacts(const RawSignalRecord& record,
                                        const EdaArtifactDetector& detector) {
    ArtifactFlagSeries series;
    series.participant_id = record.participant_id;
    series.modality = Modality::EDA;

    // artifact windows are defined at a nominal 4 Hz
    std::vector<double> samples;
    double rate = record.sampling_rate_hz;
    if (rate > 4.0) {
        const std::size_t factor =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(rate / 4.0)));
        samples = dsp::mean_decimate(record.samples, factor);
        rate = rate / static_cast<double>(factor);
    } else {
        samples = record.samples;
    }

    if (samples.size() < kArtifactWindowSamples) {
        series.warnings.push_back("record shorter than one artifact window");
        return series;
    }
    for (std::size_t start = 0; start + kArtifactWindowSamples <= samples.size();
         start += kArtifactWindowSamples) {
        const std::span<const double> w(samples.data() + start, kArtifactWindowSamples);
        const auto features = eda_artifact_features(w, rate);
        series.flags.push_back(detector.score(features, w) > 0.5);
    }
    return series;
}

ArtifactFlagSeries detect_ppg_artifacts(const RawSignalRecord& record,
                                        const PpgArtifactDetector& detector) {
    ArtifactFlagSeries series;
    series.participant_id = record.participant_id;
    series.modality = Modality::PPG;
    const auto& samples = record.samples;
    if (samples.size() < kArtifactWindowSamples) {
        series.warnings.push_back("record shorter than one artifact window");
        return series;
    }
    for (std::size_t start = 0; start + kArtifactWindowSamples <= samples.size();
         start += kArtifactWindowSamples) {
        const std::span<const double> w(samples.data() + start, kArtifactWindowSamples);
        const auto mask = detector.mask(w, record.sampling_rate_hz);
        std::size_t ones = 0;
        for (double p : mask) ones += p > 0.5 ? 1 : 0;
        const double mean_binarized = static_cast<double>(ones) / static_cast<double>(mask.size());
        series.flags.push_back(mean_binarized > 0.5);
    }
    return series;
}

ArtifactReport artifact_report(const std::vector<ArtifactFlagSeries>& series) {
    // windows pooled per participant, fractions averaged across participants
    std::map<std::string, std::pair<std::size_t, std::size_t>> counts;  // artifacts, windows
    for (const auto& s : series) {
        auto& [arts, wins] = counts[s.participant_id];
        arts += s.artifact_count();
        wins += s.flags.size();
    }
    ArtifactReport report;
    std::vector<double> fractions;
    for (const auto& [pid, c] : counts) {
        if (c.second == 0) continue;
        const double frac = static_cast<double>(c.first) / static_cast<double>(c.second);
        report.participant_fractions[pid] = frac;
        fractions.push_back(frac);
    }
    if (fractions.empty()) throw Error("artifact_report: no windows");
    report.mean_fraction = dsp::mean(fractions);
    report.std_fraction = dsp::stddev(fractions);
    return report;
}

}  // namespace afb
