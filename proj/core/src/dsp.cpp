#include "affectbench/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace afb {
namespace dsp {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double mean(std::span<const double> x) {
    if (x.empty()) return 0.0;
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    if (x.empty()) return 0.0;
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) { return std::sqrt(variance(x)); }

double skewness(std::span<const double> x) {
    const double m = mean(x);
    const double sd = stddev(x);
    if (sd == 0.0 || x.empty()) return 0.0;
    double s = 0.0;
    for (double v : x) s += std::pow((v - m) / sd, 3.0);
    return s / static_cast<double>(x.size());
}

double excess_kurtosis(std::span<const double> x) {
    const double m = mean(x);
    const double sd = stddev(x);
    if (sd == 0.0 || x.empty()) return 0.0;
    double s = 0.0;
    for (double v : x) s += std::pow((v - m) / sd, 4.0);
    return s / static_cast<double>(x.size()) - 3.0;
}

double percentile(std::span<const double> x, double p) {
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.empty()) return 0.0;
    if (sorted.size() == 1) return sorted[0];
    const double rank = p / 100.0 * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(rank));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double linear_slope(std::span<const double> x, double rate_hz) {
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    // regress against t_i = i / rate
    const double tm = (static_cast<double>(n) - 1.0) / (2.0 * rate_hz);
    const double xm = mean(x);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / rate_hz;
        num += (t - tm) * (x[i] - xm);
        den += (t - tm) * (t - tm);
    }
    return den > 0.0 ? num / den : 0.0;
}

double histogram_entropy(std::span<const double> x, int bins) {
    if (x.empty() || bins < 1) return 0.0;
    const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) return 0.0;  // single bin
    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    for (double v : x) {
        int b = static_cast<int>((v - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        ++counts[static_cast<std::size_t>(b)];
    }
    double h = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log(p);
    }
    return h;
}

double trapz_abs(std::span<const double> x, double rate_hz) {
    if (x.size() < 2) return 0.0;
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        s += 0.5 * (std::abs(x[i - 1]) + std::abs(x[i]));
    return s / rate_hz;
}

// ---- filter design ----

// Cascade for the analog Butterworth prototype: (s + 1) for odd order plus
// sections s^2 + 2 sin(phi_k) s + 1, phi_k = (2k-1)pi/(2N).
static std::vector<Biquad> butterworth(int order, double cutoff_hz, double rate_hz,
                                       bool highpass) {
    const double omega = std::tan(kPi * cutoff_hz / rate_hz);  // prewarped
    std::vector<Biquad> sections;

    if (order % 2 == 1) {
        Biquad s;
        const double a0 = omega + 1.0;
        if (!highpass) {
            s.b0 = omega / a0;
            s.b1 = omega / a0;
        } else {
            s.b0 = 1.0 / a0;
            s.b1 = -1.0 / a0;
        }
        s.a1 = (omega - 1.0) / a0;
        sections.push_back(s);
    }
    for (int k = 1; k <= order / 2; ++k) {
        const double a = 2.0 * std::sin((2.0 * k - 1.0) * kPi / (2.0 * order));
        const double a0 = 1.0 + a * omega + omega * omega;
        Biquad s;
        if (!highpass) {
            const double g = omega * omega / a0;
            s.b0 = g;
            s.b1 = 2.0 * g;
            s.b2 = g;
        } else {
            s.b0 = 1.0 / a0;
            s.b1 = -2.0 / a0;
            s.b2 = 1.0 / a0;
        }
        s.a1 = (2.0 * omega * omega - 2.0) / a0;
        s.a2 = (1.0 - a * omega + omega * omega) / a0;
        sections.push_back(s);
    }
    return sections;
}

std::vector<Biquad> butterworth_lowpass(int order, double cutoff_hz, double rate_hz) {
    return butterworth(order, cutoff_hz, rate_hz, false);
}

std::vector<Biquad> butterworth_highpass(int order, double cutoff_hz, double rate_hz) {
    return butterworth(order, cutoff_hz, rate_hz, true);
}

static void filter_inplace(const std::vector<Biquad>& sections, std::vector<double>& x) {
    for (const auto& s : sections) {
        double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
        for (double& v : x) {
            const double in = v;
            const double out = s.b0 * in + s.b1 * x1 + s.b2 * x2 - s.a1 * y1 - s.a2 * y2;
            x2 = x1;
            x1 = in;
            y2 = y1;
            y1 = out;
            v = out;
        }
    }
}

std::vector<double> filtfilt(const std::vector<Biquad>& sections, std::span<const double> x,
                             std::size_t pad) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    pad = std::min(pad, n - 1);

    // odd reflection padding at both ends
    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
    ext.insert(ext.end(), x.begin(), x.end());
    for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

    filter_inplace(sections, ext);
    std::reverse(ext.begin(), ext.end());
    filter_inplace(sections, ext);
    std::reverse(ext.begin(), ext.end());

    return std::vector<double>(ext.begin() + static_cast<long>(pad),
                               ext.begin() + static_cast<long>(pad + n));
}

std::vector<double> zero_phase_highpass1(std::span<const double> x, double cutoff_hz,
                                         double rate_hz) {
    const auto sections = butterworth_highpass(1, cutoff_hz, rate_hz);
    const std::size_t pad =
        static_cast<std::size_t>(std::lround(std::min(3.0 * rate_hz / cutoff_hz, 1e6)));
    return filtfilt(sections, x, pad);
}

// ---- spectra ----

Psd welch_psd(std::span<const double> x, double rate_hz, std::size_t segment) {
    Psd psd;
    const std::size_t n = x.size();
    if (n < 2) return psd;
    const std::size_t L = std::min(segment, n);
    const std::size_t step = std::max<std::size_t>(1, L / 2);  // 50% overlap

    std::vector<double> window(L);
    double u = 0.0;
    for (std::size_t i = 0; i < L; ++i) {
        window[i] = L > 1 ? 0.5 * (1.0 - std::cos(2.0 * kPi * i / (L - 1))) : 1.0;
        u += window[i] * window[i];
    }

    const std::size_t nbins = L / 2 + 1;
    psd.freq_hz.resize(nbins);
    psd.power.assign(nbins, 0.0);
    for (std::size_t k = 0; k < nbins; ++k)
        psd.freq_hz[k] = static_cast<double>(k) * rate_hz / static_cast<double>(L);

    std::size_t count = 0;
    for (std::size_t start = 0; start + L <= n; start += step) {
        // constant detrend per segment
        double m = 0.0;
        for (std::size_t i = 0; i < L; ++i) m += x[start + i];
        m /= static_cast<double>(L);

        for (std::size_t k = 0; k < nbins; ++k) {
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t i = 0; i < L; ++i) {
                const double phase = -2.0 * kPi * static_cast<double>(k * i) / L;
                acc += window[i] * (x[start + i] - m) *
                       std::complex<double>(std::cos(phase), std::sin(phase));
            }
            double p = std::norm(acc) / (rate_hz * u);
            if (k != 0 && !(L % 2 == 0 && k == nbins - 1)) p *= 2.0;
            psd.power[k] += p;
        }
        ++count;
        if (start + L == n) break;
    }
    if (count > 0)
        for (double& p : psd.power) p /= static_cast<double>(count);
    return psd;
}

double band_power(const Psd& psd, double lo_hz, double hi_hz) {
    if (psd.freq_hz.size() < 2) return 0.0;
    const double df = psd.freq_hz[1] - psd.freq_hz[0];
    double s = 0.0;
    for (std::size_t k = 0; k < psd.freq_hz.size(); ++k)
        if (psd.freq_hz[k] >= lo_hz && psd.freq_hz[k] < hi_hz) s += psd.power[k] * df;
    return s;
}

double spectral_flatness(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 4) return 0.0;
    const double m = mean(x);
    const std::size_t nbins = n / 2;
    double log_sum = 0.0, lin_sum = 0.0;
    std::size_t used = 0;
    for (std::size_t k = 1; k <= nbins; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            const double phase = -2.0 * kPi * static_cast<double>(k * i) / n;
            acc += (x[i] - m) * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        const double p = std::norm(acc) + 1e-30;
        log_sum += std::log(p);
        lin_sum += p;
        ++used;
    }
    if (used == 0 || lin_sum <= 0.0) return 0.0;
    const double gm = std::exp(log_sum / static_cast<double>(used));
    const double am = lin_sum / static_cast<double>(used);
    return gm / am;
}

std::vector<HaarLevel> haar_dwt(std::span<const double> x, int levels) {
    std::vector<HaarLevel> out;
    std::vector<double> approx(x.begin(), x.end());
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int lvl = 0; lvl < levels && approx.size() >= 2; ++lvl) {
        HaarLevel level;
        const std::size_t pairs = approx.size() / 2;
        for (std::size_t i = 0; i < pairs; ++i) {
            level.approx.push_back((approx[2 * i] + approx[2 * i + 1]) * inv_sqrt2);
            level.detail.push_back((approx[2 * i] - approx[2 * i + 1]) * inv_sqrt2);
        }
        if (approx.size() % 2) level.approx.push_back(approx.back());
        approx = level.approx;
        out.push_back(std::move(level));
    }
    return out;
}

std::vector<double> resample_linear(std::span<const double> t, std::span<const double> v,
                                    double rate_hz) {
    std::vector<double> out;
    if (t.size() < 2 || t.size() != v.size()) return out;
    const double dt = 1.0 / rate_hz;
    std::size_t j = 0;
    for (double tt = t.front(); tt <= t.back() + 1e-12; tt += dt) {
        while (j + 2 < t.size() && t[j + 1] < tt) ++j;
        const double span = t[j + 1] - t[j];
        const double frac = span > 0.0 ? std::clamp((tt - t[j]) / span, 0.0, 1.0) : 0.0;
        out.push_back(v[j] + frac * (v[j + 1] - v[j]));
    }
    return out;
}

std::vector<double> mean_decimate(std::span<const double> x, std::size_t factor) {
    if (factor <= 1) return std::vector<double>(x.begin(), x.end());
    std::vector<double> out;
    for (std::size_t i = 0; i + factor <= x.size(); i += factor) {
        double s = 0.0;
        for (std::size_t k = 0; k < factor; ++k) s += x[i + k];
        out.push_back(s / static_cast<double>(factor));
    }
    return out;
}

}  // namespace dsp
}  // namespace afb
