#include "affectbench/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "affectbench/rng.hpp"

namespace afb {

namespace {

constexpr double kTwoPi = 6.283185307179586;

struct QuadrantDef {
    Quadrant quadrant;
    Arousal arousal;
    Valence valence;
    const char* name;
};

constexpr QuadrantDef kQuadrants[] = {
    {Quadrant::HAPV, Arousal::High, Valence::Positive, "hapv"},
    {Quadrant::HANV, Arousal::High, Valence::Negative, "hanv"},
    {Quadrant::LAPV, Arousal::Low, Valence::Positive, "lapv"},
    {Quadrant::LANV, Arousal::Low, Valence::Negative, "lanv"},
};

// difference-of-exponentials SCR bump, unit peak amplitude
double scr_bump(double t, double rise_s, double decay_s) {
    if (t <= 0.0) return 0.0;
    const double t_peak =
        std::log(decay_s / rise_s) * rise_s * decay_s / (decay_s - rise_s);
    const double peak = std::exp(-t_peak / decay_s) - std::exp(-t_peak / rise_s);
    return (std::exp(-t / decay_s) - std::exp(-t / rise_s)) / peak;
}

}  // namespace

void SynthSpec::validate() const {
    if (n_participants < 1 || segments_per_quadrant < 1 || segment_length_s <= 0)
        throw Error("synth spec: nonpositive sizes");
    if (!(scr_rate_high_per_min > scr_rate_low_per_min))
        throw Error("synth spec: high-arousal SCR rate must exceed low-arousal rate");
    if (!(hr_high_bpm > hr_low_bpm))
        throw Error("synth spec: high-arousal HR must exceed low-arousal HR");
    if (eda_rate_hz <= 0 || ppg_rate_hz <= 0) throw Error("synth spec: nonpositive rates");
}

SynthCorpus generate_corpus(const SynthSpec& spec) {
    spec.validate();
    SynthCorpus corpus;

    corpus.descriptor.name = "synth";
    corpus.descriptor.setting = Setting::Lab;
    corpus.descriptor.device = Device::LabDevice;
    corpus.descriptor.labeling = Labeling::StimulusLabel;
    corpus.descriptor.sampling_rates = {{Modality::EDA, spec.eda_rate_hz},
                                        {Modality::PPG, spec.ppg_rate_hz}};

    const int segs_per_participant = 4 * spec.segments_per_quadrant;
    const std::size_t eda_seg_len =
        static_cast<std::size_t>(std::lround(spec.segment_length_s * spec.eda_rate_hz));
    const std::size_t ppg_seg_len =
        static_cast<std::size_t>(std::lround(spec.segment_length_s * spec.ppg_rate_hz));

    for (int p = 0; p < spec.n_participants; ++p) {
        char pid[16];
        std::snprintf(pid, sizeof(pid), "p%02d", p);
        Rng rng = Rng::derive(spec.seed, std::string("participant/") + pid);

        ParticipantInfo info;
        info.participant_id = pid;
        info.gender = (p % 2 == 0) ? Gender::Female : Gender::Male;
        info.age_years = 20 + 2 * p;  // spans the Young/Old boundary
        corpus.descriptor.participants.push_back(info);

        // segment order: each quadrant repeated, then shuffled per participant
        std::vector<int> quadrant_order;
        for (int q = 0; q < 4; ++q)
            for (int s = 0; s < spec.segments_per_quadrant; ++s) quadrant_order.push_back(q);
        rng.shuffle(quadrant_order);

        const double baseline_uS = rng.uniform(2.0, 8.0);

        RawSignalRecord eda{"synth", pid, std::string(pid) + "-eda", Modality::EDA,
                            spec.eda_rate_hz, {}, 0.0};
        RawSignalRecord ppg{"synth", pid, std::string(pid) + "-ppg", Modality::PPG,
                            spec.ppg_rate_hz, {}, 0.0};

        std::vector<int> per_quadrant_count(4, 0);
        for (int s = 0; s < segs_per_participant; ++s) {
            const auto& q = kQuadrants[static_cast<std::size_t>(quadrant_order[
                static_cast<std::size_t>(s)])];
            const double seg_start_s = s * spec.segment_length_s;

            // ---- EDA ----
            std::vector<double> seg(eda_seg_len, 0.0);
            const double slope = (q.valence == Valence::Positive ? 1.0 : -1.0) *
                                 spec.tonic_slope_uS_per_s;
            for (std::size_t i = 0; i < eda_seg_len; ++i) {
                const double t = static_cast<double>(i) / spec.eda_rate_hz;
                seg[i] = baseline_uS + slope * t + spec.eda_noise_uS * rng.normal();
            }
            const double scr_rate_per_s =
                (q.arousal == Arousal::High ? spec.scr_rate_high_per_min
                                            : spec.scr_rate_low_per_min) /
                60.0;
            // Poisson-timed bumps via exponential gaps
            double t_event = -std::log(1.0 - rng.uniform()) / scr_rate_per_s;
            while (t_event < spec.segment_length_s - 5.0) {
                const double amp =
                    rng.uniform(spec.scr_amplitude_min_uS, spec.scr_amplitude_max_uS);
                for (std::size_t i = 0; i < eda_seg_len; ++i) {
                    const double t = static_cast<double>(i) / spec.eda_rate_hz - t_event;
                    if (t > 0.0 && t < 20.0) seg[i] += amp * scr_bump(t, 0.75, 3.0);
                }
                t_event += -std::log(1.0 - rng.uniform()) / scr_rate_per_s;
            }
            eda.samples.insert(eda.samples.end(), seg.begin(), seg.end());

            // ---- PPG ----
            std::vector<double> pulse(ppg_seg_len, 0.0);
            const double hr =
                q.arousal == Arousal::High ? spec.hr_high_bpm : spec.hr_low_bpm;
            const double hrv_depth_s = (q.valence == Valence::Positive
                                            ? spec.hrv_depth_positive_ms
                                            : spec.hrv_depth_negative_ms) /
                                       1000.0;
            double beat_t = rng.uniform(0.0, 0.3);
            while (beat_t < spec.segment_length_s) {
                // raised-cosine pulse, 0.35 s wide, unit amplitude
                const long center = std::lround(beat_t * spec.ppg_rate_hz);
                const long half = std::lround(0.175 * spec.ppg_rate_hz);
                for (long i = center - half; i <= center + half; ++i) {
                    if (i < 0 || i >= static_cast<long>(ppg_seg_len)) continue;
                    const double phase =
                        (static_cast<double>(i) / spec.ppg_rate_hz - beat_t) / 0.175;
                    pulse[static_cast<std::size_t>(i)] +=
                        0.5 * (1.0 + std::cos(3.14159265358979323846 * phase));
                }
                const double period = 60.0 / hr +
                                      hrv_depth_s * std::sin(kTwoPi * 0.1 * beat_t) +
                                      spec.beat_jitter_s * rng.normal();
                beat_t += std::max(0.33, period);
            }
            for (std::size_t i = 0; i < ppg_seg_len; ++i)
                pulse[i] += spec.ppg_noise * rng.normal();
            ppg.samples.insert(ppg.samples.end(), pulse.begin(), pulse.end());

            // ---- annotation ----
            AnnotationRecord a;
            a.participant_id = pid;
            a.kind = AnnotationRecord::Kind::TaskInterval;
            const int rep = per_quadrant_count[static_cast<std::size_t>(
                quadrant_order[static_cast<std::size_t>(s)])]++;
            a.task = std::string(q.name) + "_" + std::to_string(rep);
            a.start_s = seg_start_s;
            a.end_s = seg_start_s + spec.segment_length_s;
            corpus.annotations.push_back(std::move(a));
        }

        for (int k = 0; k < spec.injected_steps_per_participant; ++k) {
            const std::size_t at = rng.index(eda.samples.size());
            for (std::size_t i = at; i < eda.samples.size(); ++i)
                eda.samples[i] += spec.injected_step_uS;
        }

        corpus.records.push_back(std::move(eda));
        corpus.records.push_back(std::move(ppg));
    }

    corpus.scheme.name = "synth";
    for (const auto& q : kQuadrants)
        for (int s = 0; s < spec.segments_per_quadrant; ++s)
            corpus.scheme.rules.push_back(
                {std::string(q.name) + "_" + std::to_string(s), q.arousal, q.valence});

    return corpus;
}

}  // namespace afb
