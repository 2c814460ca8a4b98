#include <doctest.h>

#include <cmath>
#include <vector>

#include "affectbench/features_eda.hpp"
#include "affectbench/rng.hpp"

using namespace afb;

namespace {

// Difference-of-exponentials bump normalized to unit peak, the planted-event
// shape used throughout these tests.
double bump(double t, double rise = 0.75, double decay = 3.0) {
    if (t <= 0.0) return 0.0;
    const double tp = std::log(decay / rise) * rise * decay / (decay - rise);
    const double peak = std::exp(-tp / decay) - std::exp(-tp / rise);
    return (std::exp(-t / decay) - std::exp(-t / rise)) / peak;
}

std::vector<double> planted_signal(const std::vector<double>& event_times_s, double amp,
                                   double seconds, double rate, double baseline = 5.0) {
    std::vector<double> x(static_cast<std::size_t>(seconds * rate), baseline);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = static_cast<double>(i) / rate;
        for (double e : event_times_s) x[i] += amp * bump(t - e);
    }
    return x;
}

}  // namespace

TEST_CASE("tonic plus phasic reconstructs the input exactly") {
    Rng rng(17);
    std::vector<double> x(480);
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = 4.0 + 0.01 * static_cast<double>(i) + 0.05 * rng.normal();
    const auto [tonic, phasic] = decompose_eda(x, 4.0);
    REQUIRE(tonic.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(tonic[i] + phasic[i] == doctest::Approx(x[i]).epsilon(1e-12));
}

TEST_CASE("decomposition of a constant puts everything in the tonic component") {
    // the zero-phase highpass leaves a small edge transient, well below any
    // SCR amplitude of interest
    const std::vector<double> x(120, 6.0);
    const auto [tonic, phasic] = decompose_eda(x, 4.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(std::abs(phasic[i]) < 1e-3);
        CHECK(tonic[i] == doctest::Approx(6.0).epsilon(1e-3));
    }
}

TEST_CASE("decomposition rejects unusable input") {
    CHECK_THROWS_AS(decompose_eda(std::vector<double>{1.0, 2.0}, 4.0), Error);   // < 2 s
    CHECK_THROWS_AS(decompose_eda(std::vector<double>(100, 1.0), 0.5), Error);   // rate < 1 Hz
}

TEST_CASE("planted bumps are recovered exactly at zero noise") {
    const std::vector<double> events = {10.0, 40.0, 70.0, 95.0};
    const auto x = planted_signal(events, 0.08, 120.0, 4.0);
    const auto [tonic, phasic] = decompose_eda(x, 4.0);
    const auto detected = detect_scr_peaks(phasic, 4.0);

    REQUIRE(detected.size() == events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        const double peak_t = static_cast<double>(detected[i].peak_index) / 4.0;
        // bump peaks ~1.4 s after onset
        CHECK(std::abs(peak_t - (events[i] + 1.4)) < 1.0);
        CHECK(detected[i].amplitude_uS > 0.01);
        CHECK(detected[i].rise_time_s > 0.0);
    }
}

TEST_CASE("sub-threshold bumps are never detected") {
    const auto x = planted_signal({30.0, 60.0, 90.0}, 0.005, 120.0, 4.0);
    const auto [tonic, phasic] = decompose_eda(x, 4.0);
    CHECK(detect_scr_peaks(phasic, 4.0).empty());
}

TEST_CASE("half recovery is reported within the post-apex window") {
    const auto x = planted_signal({20.0}, 0.1, 60.0, 4.0);
    const auto [tonic, phasic] = decompose_eda(x, 4.0);
    const auto detected = detect_scr_peaks(phasic, 4.0);
    REQUIRE(detected.size() == 1);
    REQUIRE(detected[0].half_recovery_time_s.has_value());
    CHECK(*detected[0].half_recovery_time_s > 0.0);
    CHECK(*detected[0].half_recovery_time_s <= 10.0);
}

TEST_CASE("the eda feature vector carries the 15 registry names in order") {
    const auto x = planted_signal({15.0, 45.0}, 0.06, 90.0, 4.0);
    const auto fv = eda_features(x, 4.0);
    CHECK(fv.names == registry::eda_feature_names());
    REQUIRE(fv.size() == 15);
    for (double v : fv.values) CHECK(std::isfinite(v));
    CHECK(fv.at("nSCR") == 2.0);
    CHECK(fv.at("sumAmpSCR") == doctest::Approx(2.0 * fv.at("meanAmpSCR")));
    CHECK(fv.at("dynrange") > 0.0);
}

TEST_CASE("eda features on an event-free signal zero the SCR aggregates") {
    std::vector<double> x(360);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 3.0 + 0.001 * static_cast<double>(i);
    const auto fv = eda_features(x, 4.0);
    CHECK(fv.at("nSCR") == 0.0);
    CHECK(fv.at("meanAmpSCR") == 0.0);
    CHECK(fv.at("sumAmpSCR") == 0.0);
    CHECK(fv.at("meanRespSCR") == 0.0);
    CHECK(fv.at("slope") == doctest::Approx(0.004));  // 0.001 per sample at 4 Hz
}

TEST_CASE("eda features reject non-finite input") {
    std::vector<double> x(100, 1.0);
    x[50] = std::nan("");
    CHECK_THROWS_AS(eda_features(x, 4.0), Error);
}

TEST_CASE("slope feature is valence-sign sensitive") {
    std::vector<double> up(480), down(480);
    for (std::size_t i = 0; i < up.size(); ++i) {
        const double t = static_cast<double>(i) / 4.0;
        up[i] = 5.0 + 0.002 * t;
        down[i] = 5.0 - 0.002 * t;
    }
    CHECK(eda_features(up, 4.0).at("slope") > 0.0);
    CHECK(eda_features(down, 4.0).at("slope") < 0.0);
}
