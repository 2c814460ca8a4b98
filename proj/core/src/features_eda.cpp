#include "affectbench/features_eda.hpp"

#include <algorithm>
#include <cmath>

#include "affectbench/dsp.hpp"

namespace afb {

std::pair<std::vector<double>, std::vector<double>> decompose_eda(std::span<const double> samples,
                                                                  double rate_hz) {
    if (rate_hz < 1.0) throw Error("decompose_eda: rate below 1 Hz");
    if (static_cast<double>(samples.size()) / rate_hz < 2.0)
        throw Error("insufficient samples");
    std::vector<double> phasic = dsp::zero_phase_highpass1(samples, 0.05, rate_hz);
    std::vector<double> tonic(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) tonic[i] = samples[i] - phasic[i];
    return {std::move(tonic), std::move(phasic)};
}

std::vector<SCREvent> detect_scr_peaks(std::span<const double> phasic, double rate_hz,
                                       const ScrDetectionParams& params) {
    std::vector<SCREvent> events;
    const std::size_t n = phasic.size();
    if (n < 3) return events;
    const std::size_t pre =
        static_cast<std::size_t>(std::lround(params.pre_apex_search_s * rate_hz));
    const std::size_t post =
        static_cast<std::size_t>(std::lround(params.half_recovery_window_s * rate_hz));

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(phasic[i] > phasic[i - 1] && phasic[i] >= phasic[i + 1])) continue;
        // onset: minimum within the pre-apex search window
        const std::size_t lo = i > pre ? i - pre : 0;
        std::size_t onset = lo;
        for (std::size_t j = lo; j < i; ++j)
            if (phasic[j] < phasic[onset]) onset = j;
        // onset validation offset: the rise must persist one sample past onset
        const std::size_t check = onset + static_cast<std::size_t>(params.onset_validation_offset);
        if (check >= i || phasic[check] > phasic[i]) continue;
        const double amplitude = phasic[i] - phasic[onset];
        if (amplitude < params.min_amplitude_uS) continue;

        SCREvent ev;
        ev.onset_index = onset;
        ev.peak_index = i;
        ev.amplitude_uS = amplitude;
        ev.rise_time_s = static_cast<double>(i - onset) / rate_hz;
        const double half_level = phasic[i] - 0.5 * amplitude;
        const std::size_t hi = std::min(n, i + post + 1);
        for (std::size_t j = i + 1; j < hi; ++j) {
            if (phasic[j] <= half_level) {
                ev.half_recovery_time_s = static_cast<double>(j - i) / rate_hz;
                break;
            }
        }
        events.push_back(ev);
    }
    return events;
}

FeatureVector eda_features(std::span<const double> samples, double rate_hz) {
    if (samples.empty()) throw Error("eda_features: empty window");
    for (double v : samples)
        if (!std::isfinite(v)) throw Error("eda_features: non-finite input");

    auto [tonic, phasic] = decompose_eda(samples, rate_hz);
    const auto events = detect_scr_peaks(phasic, rate_hz);

    const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    std::vector<double> diffs;
    diffs.reserve(samples.size());
    for (std::size_t i = 1; i < samples.size(); ++i)
        diffs.push_back((samples[i] - samples[i - 1]) * rate_hz);

    double sum_amp = 0.0, sum_resp = 0.0;
    std::size_t n_resp = 0;
    for (const auto& ev : events) {
        sum_amp += ev.amplitude_uS;
        if (ev.half_recovery_time_s) {
            sum_resp += *ev.half_recovery_time_s;
            ++n_resp;
        }
    }

    FeatureVector fv;
    fv.push("ku_eda", dsp::excess_kurtosis(samples));
    fv.push("sk_eda", dsp::skewness(samples));
    fv.push("dynrange", *hi_it - *lo_it);
    fv.push("slope", dsp::linear_slope(samples, rate_hz));
    fv.push("variance", dsp::variance(samples));
    fv.push("entropy", dsp::histogram_entropy(samples, 10));
    fv.push("insc", dsp::trapz_abs(samples, rate_hz));
    fv.push("first_derivative_mean", diffs.empty() ? 0.0 : dsp::mean(diffs));
    fv.push("max_scr", *std::max_element(phasic.begin(), phasic.end()));
    fv.push("min_scr", *std::min_element(phasic.begin(), phasic.end()));
    fv.push("nSCR", static_cast<double>(events.size()));
    fv.push("meanAmpSCR", events.empty() ? 0.0 : sum_amp / static_cast<double>(events.size()));
    fv.push("meanRespSCR", n_resp == 0 ? 0.0 : sum_resp / static_cast<double>(n_resp));
    fv.push("sumAmpSCR", sum_amp);
    fv.push("sumRespSCR", sum_resp);
    return fv;
}

}  // namespace afb
