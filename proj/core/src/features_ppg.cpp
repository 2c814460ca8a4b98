#include "affectbench/features_ppg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "affectbench/dsp.hpp"

namespace afb {

namespace {

constexpr double kNnBinMs = 7.8125;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::map<long, std::size_t> nn_histogram(const std::vector<double>& nn) {
    std::map<long, std::size_t> bins;
    for (double v : nn) ++bins[static_cast<long>(std::floor(v / kNnBinMs))];
    return bins;
}

double triangular_index(const std::vector<double>& nn) {
    const auto bins = nn_histogram(nn);
    std::size_t max_count = 0;
    for (const auto& [b, c] : bins) max_count = std::max(max_count, c);
    return max_count ? static_cast<double>(nn.size()) / static_cast<double>(max_count) : kNaN;
}

// Baseline width of the best least-squares triangular fit to the NN histogram.
double tinn_ms(const std::vector<double>& nn) {
    const auto bin_map = nn_histogram(nn);
    if (bin_map.size() < 2) return 0.0;
    const long first = bin_map.begin()->first;
    const long last = bin_map.rbegin()->first;
    std::vector<double> d(static_cast<std::size_t>(last - first + 1), 0.0);
    for (const auto& [b, c] : bin_map)
        d[static_cast<std::size_t>(b - first)] = static_cast<double>(c);
    std::size_t mode = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] > d[mode]) mode = i;

    double best_err = std::numeric_limits<double>::infinity();
    std::size_t best_n = 0, best_m = d.size() - 1;
    for (std::size_t nb = 0; nb <= mode; ++nb) {
        for (std::size_t mb = mode; mb < d.size(); ++mb) {
            if (nb == mb) continue;
            double err = 0.0;
            for (std::size_t i = 0; i < d.size(); ++i) {
                double q = 0.0;
                if (i >= nb && i <= mode && mode > nb)
                    q = d[mode] * static_cast<double>(i - nb) / static_cast<double>(mode - nb);
                else if (i > mode && i <= mb && mb > mode)
                    q = d[mode] * static_cast<double>(mb - i) / static_cast<double>(mb - mode);
                err += (d[i] - q) * (d[i] - q);
            }
            if (err < best_err) {
                best_err = err;
                best_n = nb;
                best_m = mb;
            }
        }
    }
    return static_cast<double>(best_m - best_n) * kNnBinMs;
}

double shannon_entropy_nn(const std::vector<double>& nn) {
    const auto bins = nn_histogram(nn);
    const double n = static_cast<double>(nn.size());
    double h = 0.0;
    for (const auto& [b, c] : bins) {
        const double p = static_cast<double>(c) / n;
        h -= p * std::log(p);
    }
    return h;
}

double approximate_entropy(const std::vector<double>& nn, int m, double r) {
    const int n = static_cast<int>(nn.size());
    if (n < m + 2) return kNaN;
    auto phi = [&](int mm) {
        const int count = n - mm + 1;
        double sum = 0.0;
        for (int i = 0; i < count; ++i) {
            int matches = 0;
            for (int j = 0; j < count; ++j) {
                double dist = 0.0;
                for (int k = 0; k < mm; ++k)
                    dist = std::max(dist, std::abs(nn[static_cast<std::size_t>(i + k)] -
                                                   nn[static_cast<std::size_t>(j + k)]));
                if (dist <= r) ++matches;
            }
            sum += std::log(static_cast<double>(matches) / static_cast<double>(count));
        }
        return sum / static_cast<double>(count);
    };
    return phi(m) - phi(m + 1);
}

}  // namespace

std::vector<double> clean_ppg(std::span<const double> samples, double rate_hz) {
    if (rate_hz < 16.0) throw Error("rate too low for pulse band");
    auto sections = dsp::butterworth_highpass(3, 0.5, rate_hz);
    const auto lp = dsp::butterworth_lowpass(3, 8.0, rate_hz);
    sections.insert(sections.end(), lp.begin(), lp.end());
    const std::size_t pad = static_cast<std::size_t>(std::lround(3.0 * rate_hz / 0.5));
    return dsp::filtfilt(sections, samples, pad);
}

std::vector<std::size_t> detect_ppg_peaks(std::span<const double> cleaned, double rate_hz) {
    const std::size_t n = cleaned.size();
    std::vector<std::size_t> accepted;
    if (n < 3) return accepted;
    const std::size_t halfw = static_cast<std::size_t>(std::lround(rate_hz));  // 2 s window
    const std::size_t min_dist = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(0.33 * rate_hz)));

    // prefix sums for the centered moving mean
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + cleaned[i];

    std::vector<std::size_t> candidates;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(cleaned[i] > cleaned[i - 1] && cleaned[i] >= cleaned[i + 1])) continue;
        const std::size_t lo = i > halfw ? i - halfw : 0;
        const std::size_t hi = std::min(n, i + halfw + 1);
        const double mm = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
        if (cleaned[i] > mm) candidates.push_back(i);
    }
    // larger peak wins within the refractory distance
    std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
        if (cleaned[a] != cleaned[b]) return cleaned[a] > cleaned[b];
        return a < b;
    });
    for (std::size_t c : candidates) {
        bool blocked = false;
        for (std::size_t a : accepted) {
            const std::size_t gap = a > c ? a - c : c - a;
            if (gap < min_dist) {
                blocked = true;
                break;
            }
        }
        if (!blocked) accepted.push_back(c);
    }
    std::sort(accepted.begin(), accepted.end());
    return accepted;
}

IBISeries ibi_series(std::span<const std::size_t> peaks, double rate_hz) {
    if (peaks.size() < 2) throw Error("insufficient NN intervals");
    IBISeries out;
    for (std::size_t i = 1; i < peaks.size(); ++i) {
        const double ms = 1000.0 * static_cast<double>(peaks[i] - peaks[i - 1]) / rate_hz;
        if (ms < 300.0 || ms > 2000.0) continue;
        out.nn_intervals_ms.push_back(ms);
        out.peak_times_s.push_back(static_cast<double>(peaks[i]) / rate_hz);
    }
    if (out.nn_intervals_ms.size() < 2) throw Error("insufficient NN intervals");
    return out;
}

FeatureVector hrv_features(const IBISeries& nn) {
    const auto& x = nn.nn_intervals_ms;
    if (x.size() < 8) throw Error("hrv_features: need at least 8 NN intervals");

    const double mean_nn = dsp::mean(x);
    std::vector<double> rates;
    rates.reserve(x.size());
    for (double v : x) rates.push_back(60000.0 / v);

    std::vector<double> diffs;
    for (std::size_t i = 1; i < x.size(); ++i) diffs.push_back(x[i] - x[i - 1]);
    const double var_nn = dsp::variance(x);
    const double var_diff = dsp::variance(diffs);
    // Poincare axes from the successive-difference and total variance
    const double sd1 = std::sqrt(var_diff / 2.0);
    const double sd2 = std::sqrt(std::max(0.0, 2.0 * var_nn - var_diff / 2.0));

    const double span_s =
        std::accumulate(x.begin(), x.end(), 0.0) / 1000.0;
    double lf = kNaN, hf = kNaN, vhf = kNaN, lfn = kNaN, hfn = kNaN, lnhf = kNaN;
    if (span_s >= 60.0) {
        std::vector<double> t(x.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            acc += x[i] / 1000.0;
            t[i] = acc;
        }
        const auto resampled = dsp::resample_linear(t, x, 4.0);
        const auto psd = dsp::welch_psd(resampled, 4.0, 256);
        lf = dsp::band_power(psd, 0.04, 0.15);
        hf = dsp::band_power(psd, 0.15, 0.4);
        vhf = dsp::band_power(psd, 0.4, 0.5);
        if (lf + hf > 0.0) {
            lfn = lf / (lf + hf);
            hfn = hf / (lf + hf);
        }
        lnhf = hf > 0.0 ? std::log(hf) : kNaN;
    }

    FeatureVector fv;
    fv.push("BPM", 60000.0 / mean_nn);
    fv.push("PPG_Rate_Mean", dsp::mean(rates));
    fv.push("HRV_MedianNN", dsp::percentile(x, 50.0));
    fv.push("HRV_Prc20NN", dsp::percentile(x, 20.0));
    fv.push("HRV_MinNN", *std::min_element(x.begin(), x.end()));
    fv.push("HRV_HTI", triangular_index(x));
    fv.push("HRV_TINN", tinn_ms(x));
    fv.push("HRV_LF", lf);
    fv.push("HRV_HF", hf);
    fv.push("HRV_VHF", vhf);
    fv.push("HRV_LFn", lfn);
    fv.push("HRV_HFn", hfn);
    fv.push("HRV_LnHF", lnhf);
    fv.push("HRV_SD1", sd1);
    fv.push("HRV_SD2", sd2);
    fv.push("HRV_SD1SD2", sd2 > 0.0 ? sd1 / sd2 : kNaN);
    fv.push("HRV_CVI", (sd1 > 0.0 && sd2 > 0.0) ? std::log10(16.0 * sd1 * sd2) : kNaN);
    fv.push("HRV_ApEn", approximate_entropy(x, 2, 0.2 * dsp::stddev(x)));
    fv.push("HRV_ShanEn", shannon_entropy_nn(x));
    return fv;
}

FeatureVector ppg_features(std::span<const double> samples, double rate_hz) {
    FeatureVector fv;
    try {
        const auto cleaned = clean_ppg(samples, rate_hz);
        const auto peaks = detect_ppg_peaks(cleaned, rate_hz);
        const auto nn = ibi_series(peaks, rate_hz);
        fv = hrv_features(nn);
    } catch (const Error&) {
        for (const auto& name : registry::hrv_feature_names()) fv.push(name, kNaN);
    }
    for (const auto& name : registry::hrv_reserved_names()) fv.push(name, kNaN);
    return fv;
}

}  // namespace afb
