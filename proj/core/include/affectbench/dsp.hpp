#pragma once

#include <span>
#include <vector>

namespace afb {
namespace dsp {

// ---- basic statistics (population moments) ----

double mean(std::span<const double> x);
double variance(std::span<const double> x);             // population
double stddev(std::span<const double> x);               // population
double skewness(std::span<const double> x);             // 0 for constant input
double excess_kurtosis(std::span<const double> x);      // 0 for constant input
double percentile(std::span<const double> x, double p); // linear interpolation, p in [0,100]

/// Least-squares slope of x against time at the given rate, per second.
double linear_slope(std::span<const double> x, double rate_hz);

/// Shannon entropy (nats) of an n-bin amplitude histogram over [min, max].
double histogram_entropy(std::span<const double> x, int bins);

/// Trapezoidal integral of |x| over time.
double trapz_abs(std::span<const double> x, double rate_hz);

// ---- IIR filtering ----

struct Biquad {
    // y[n] = b0 x[n] + b1 x[n-1] + b2 x[n-2] - a1 y[n-1] - a2 y[n-2]
    double b0 = 1, b1 = 0, b2 = 0, a1 = 0, a2 = 0;
};

/// Butterworth low-pass of the given order as cascaded sections.
std::vector<Biquad> butterworth_lowpass(int order, double cutoff_hz, double rate_hz);
/// Butterworth high-pass of the given order as cascaded sections.
std::vector<Biquad> butterworth_highpass(int order, double cutoff_hz, double rate_hz);

/// Forward-backward (zero-phase) application of a biquad cascade with
/// odd-reflection edge padding.
std::vector<double> filtfilt(const std::vector<Biquad>& sections, std::span<const double> x,
                             std::size_t pad = 0);

/// Zero-phase first-order high-pass, the tonic/phasic splitter.
std::vector<double> zero_phase_highpass1(std::span<const double> x, double cutoff_hz,
                                         double rate_hz);

// ---- spectra ----

struct Psd {
    std::vector<double> freq_hz;
    std::vector<double> power;  // one-sided density, units^2 / Hz
};

/// Welch periodogram: Hann window, `segment` samples (clamped to the input
/// length), 50% overlap, one-sided density scaling.
Psd welch_psd(std::span<const double> x, double rate_hz, std::size_t segment = 256);

/// Integrated PSD over [lo_hz, hi_hz), rectangle rule.
double band_power(const Psd& psd, double lo_hz, double hi_hz);

/// Spectral flatness (geometric / arithmetic mean of the power spectrum),
/// in [0, 1]; 1 for white noise, near 0 for tonal content.
double spectral_flatness(std::span<const double> x);

// ---- wavelets ----

struct HaarLevel {
    std::vector<double> detail;
    std::vector<double> approx;
};

/// Multilevel Haar decomposition. Odd-length carries its last sample into the
/// approximation unchanged. Returns one entry per level, detail coefficients
/// per level plus the final approximation in the last entry.
std::vector<HaarLevel> haar_dwt(std::span<const double> x, int levels);

// ---- resampling ----

/// Linear interpolation of (t, v) samples onto a uniform grid at rate_hz,
/// spanning [t.front(), t.back()].
std::vector<double> resample_linear(std::span<const double> t, std::span<const double> v,
                                    double rate_hz);

/// Downsample by integer factor via block means.
std::vector<double> mean_decimate(std::span<const double> x, std::size_t factor);

}  // namespace dsp
}  // namespace afb
