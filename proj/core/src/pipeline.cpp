#include "affectbench/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <json.hpp>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "affectbench/csvio.hpp"
#include "affectbench/features_eda.hpp"
#include "affectbench/features_ppg.hpp"

namespace afb {

namespace {

using nlohmann::json;

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

LoadedDataset load_dataset(const DatasetConfig& config) {
    LoadedDataset ds;
    ds.spec = load_dataset_spec(config.config_path);
    ds.spec.descriptor.name = config.id.empty() ? ds.spec.descriptor.name : config.id;

    const auto load_signal = [&](const std::string& path, Modality m) {
        if (path.empty()) return;
        std::ifstream in(path);
        if (!in) throw Error("cannot open signal file: " + path);
        auto records = parse_signal_file(in, m, ds.spec.descriptor);
        for (auto& r : records) {
            r.dataset_id = ds.spec.descriptor.name;
            ds.records.push_back(std::move(r));
        }
    };
    load_signal(config.eda_signal_path, Modality::EDA);
    load_signal(config.ppg_signal_path, Modality::PPG);
    if (ds.records.empty()) throw Error("dataset " + config.id + ": no signal files configured");

    if (!config.annotation_path.empty()) {
        std::ifstream in(config.annotation_path);
        if (!in) throw Error("cannot open annotation file: " + config.annotation_path);
        ds.annotations = parse_annotation_file(in);
    }
    return ds;
}

namespace {

// Hour/prompt segments are labeled from self-reports: a discrete rating inside
// the segment wins; otherwise the overlapping span of the participant's
// continuous trace, binned against the participant's own trace mean.
std::optional<LabelSet> label_from_ratings(const Segment& seg, double seg_start_s,
                                           double seg_end_s,
                                           const std::vector<AnnotationRecord>& annotations,
                                           const BinningScheme& scheme) {
    for (const auto& a : annotations) {
        if (a.kind != AnnotationRecord::Kind::DiscreteRating) continue;
        if (a.participant_id != seg.participant_id) continue;
        if (a.time_s >= seg_start_s && a.time_s < seg_end_s)
            return bin_discrete_rating(a, scheme);
    }
    for (const auto& a : annotations) {
        if (a.kind != AnnotationRecord::Kind::ContinuousRating) continue;
        if (a.participant_id != seg.participant_id) continue;
        AnnotationRecord window = a;
        window.times_s.clear();
        window.arousal_values.clear();
        window.valence_values.clear();
        for (std::size_t i = 0; i < a.times_s.size(); ++i) {
            if (a.times_s[i] < seg_start_s || a.times_s[i] >= seg_end_s) continue;
            window.times_s.push_back(a.times_s[i]);
            window.arousal_values.push_back(a.arousal_values[i]);
            window.valence_values.push_back(a.valence_values[i]);
        }
        if (window.times_s.empty()) continue;
        const auto mean = [](const std::vector<double>& xs) {
            return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
        };
        return bin_continuous_rating(window, scheme, mean(a.arousal_values),
                                     mean(a.valence_values));
    }
    return std::nullopt;
}

}  // namespace

SegmentStore build_segments(const LoadedDataset& dataset) {
    SegmentStore store;
    std::vector<Segment> raw_segments;

    for (const auto& record : dataset.records) {
        const double t0 = record.start_time_s.value_or(0.0);
        if (dataset.spec.segmentation == "task") {
            auto result = segment_by_task(record, dataset.annotations);
            for (auto& w : result.warnings)
                store.warnings.push_back(w.participant_id + ": " + w.detail);
            for (auto& seg : result.segments) {
                seg.labels = bin_task_label(seg.provenance.task_name, dataset.spec.scheme);
                raw_segments.push_back(std::move(seg));
            }
        } else if (dataset.spec.segmentation == "hourly") {
            for (auto& seg : segment_hourly(record)) {
                const double start = t0 + 3600.0 * seg.provenance.hour_index;
                const double end =
                    start + static_cast<double>(seg.slices[0].samples.size()) /
                                seg.slices[0].sampling_rate_hz;
                seg.labels = label_from_ratings(seg, start, end, dataset.annotations,
                                                dataset.spec.scheme);
                if (!seg.labels) {
                    store.warnings.push_back(seg.segment_id + ": no rating in hour, skipped");
                    continue;
                }
                raw_segments.push_back(std::move(seg));
            }
        } else {  // prompt: discrete self-reports anchor the slices
            for (const auto& a : dataset.annotations) {
                if (a.kind != AnnotationRecord::Kind::DiscreteRating) continue;
                if (a.participant_id != record.participant_id) continue;
                try {
                    Segment seg = segment_around_prompt(record, a.time_s);
                    seg.labels = bin_discrete_rating(a, dataset.spec.scheme);
                    raw_segments.push_back(std::move(seg));
                } catch (const Error& e) {
                    store.warnings.push_back(record.participant_id + ": " + e.what());
                }
            }
        }
    }

    store.segments = merge_segments(raw_segments);
    return store;
}

namespace {

RawSignalRecord record_from_slice(const Segment& seg, const SegmentSlice& slice) {
    RawSignalRecord r;
    r.dataset_id = seg.dataset_id;
    r.participant_id = seg.participant_id;
    r.recording_id = seg.segment_id;
    r.modality = slice.modality;
    r.sampling_rate_hz = slice.sampling_rate_hz;
    r.samples = slice.samples;
    return r;
}

bool slice_has_artifacts(const Segment& seg, const SegmentSlice& slice) {
    const RawSignalRecord record = record_from_slice(seg, slice);
    const ArtifactFlagSeries series =
        slice.modality == Modality::EDA
            ? detect_eda_artifacts(record, RuleBasedEdaDetector{})
            : detect_ppg_artifacts(record, RuleBasedPpgDetector{});
    return series.artifact_count() > 0;
}

FeatureVector nan_vector(const std::string& segment_id,
                         const std::vector<std::string>& names) {
    FeatureVector fv;
    fv.segment_id = segment_id;
    for (const auto& n : names) fv.push(n, std::numeric_limits<double>::quiet_NaN());
    return fv;
}

FeatureVector eda_vector(const Segment& seg) {
    const SegmentSlice* s = seg.slice(Modality::EDA);
    if (!s) return nan_vector(seg.segment_id, registry::eda_feature_names());
    try {
        FeatureVector fv = eda_features(s->samples, s->sampling_rate_hz);
        fv.segment_id = seg.segment_id;
        return fv;
    } catch (const Error&) {
        return nan_vector(seg.segment_id, registry::eda_feature_names());
    }
}

FeatureVector ppg_vector(const Segment& seg) {
    const SegmentSlice* s = seg.slice(Modality::PPG);
    if (!s) return nan_vector(seg.segment_id, registry::columns_for(Modality::PPG));
    FeatureVector fv = ppg_features(s->samples, s->sampling_rate_hz);
    fv.segment_id = seg.segment_id;
    return fv;
}

}  // namespace

FeatureTable extract_feature_table(const std::vector<Segment>& segments, Modality modality,
                                   ArtifactMode mode) {
    FeatureTable table;
    table.columns = registry::columns_for(modality);

    for (const auto& seg : segments) {
        if (!seg.labels) continue;
        const SegmentSlice* eda = seg.slice(Modality::EDA);
        const SegmentSlice* ppg = seg.slice(Modality::PPG);
        const bool want_eda = modality != Modality::PPG;
        const bool want_ppg = modality != Modality::EDA;
        if ((want_eda && !want_ppg && !eda) || (want_ppg && !want_eda && !ppg)) continue;
        if (modality == Modality::Combined && !eda && !ppg) continue;

        if (mode == ArtifactMode::Exclude) {
            bool flagged = false;
            if (want_eda && eda) flagged = flagged || slice_has_artifacts(seg, *eda);
            if (want_ppg && ppg) flagged = flagged || slice_has_artifacts(seg, *ppg);
            if (flagged) continue;
        }

        FeatureVector fv;
        switch (modality) {
            case Modality::EDA: fv = eda_vector(seg); break;
            case Modality::PPG: fv = ppg_vector(seg); break;
            case Modality::Combined:
                fv = combine_features(eda_vector(seg), ppg_vector(seg));
                break;
        }

        FeatureRow row;
        row.dataset_id = seg.dataset_id;
        row.participant_id = seg.participant_id;
        row.segment_id = seg.segment_id;
        row.labels = *seg.labels;
        row.values = fv.values;
        table.rows.push_back(std::move(row));
    }
    return table;
}

FeatureTable finalize_feature_table(const FeatureTable& raw) {
    return minmax_normalize(impute_features(raw));
}

QualityRow quality_report(const LoadedDataset& dataset, const SegmentStore& store) {
    QualityRow row;
    row.dataset = dataset.spec.descriptor.name;

    for (const auto& seg : store.segments) {
        if (!seg.labels) continue;
        ++row.arousal_counts[to_string(seg.labels->arousal)];
        ++row.valence_counts[to_string(seg.labels->valence)];
        ++row.quadrant_counts[to_string(seg.labels->quadrant)];
    }

    std::vector<ArtifactFlagSeries> eda_series, ppg_series;
    for (const auto& record : dataset.records) {
        if (record.modality == Modality::EDA)
            eda_series.push_back(detect_eda_artifacts(record, RuleBasedEdaDetector{}));
        else
            ppg_series.push_back(detect_ppg_artifacts(record, RuleBasedPpgDetector{}));
    }
    if (!eda_series.empty()) row.eda = artifact_report(eda_series);
    if (!ppg_series.empty()) row.ppg = artifact_report(ppg_series);
    return row;
}

std::string render_quality(const std::vector<QualityRow>& rows) {
    std::ostringstream out;
    for (const auto& r : rows) {
        out << "dataset " << r.dataset << "\n";
        const auto dump = [&](const char* title,
                              const std::map<std::string, std::size_t>& counts) {
            out << "  " << title << ":";
            for (const auto& [label, n] : counts) out << ' ' << label << '=' << n;
            out << "\n";
        };
        dump("arousal", r.arousal_counts);
        dump("valence", r.valence_counts);
        dump("quadrant", r.quadrant_counts);
        char buf[128];
        std::snprintf(buf, sizeof(buf), "  eda artifacts: %.4f +- %.4f\n", r.eda.mean_fraction,
                      r.eda.std_fraction);
        out << buf;
        std::snprintf(buf, sizeof(buf), "  ppg artifacts: %.4f +- %.4f\n", r.ppg.mean_fraction,
                      r.ppg.std_fraction);
        out << buf;
    }
    return out.str();
}

namespace {

struct BenchCell {
    std::string dataset;
    Modality modality;
    Task task;
    std::string model;
    Protocol protocol;
    double subsample_fraction = 0.0;  // 0 = full training data
};

}  // namespace

BenchOutput run_full_benchmark(const std::map<Modality, FeatureTable>& tables,
                               const RunConfig& config) {
    std::set<std::string> dataset_ids;
    for (const auto& [m, table] : tables)
        for (const auto& r : table.rows) dataset_ids.insert(r.dataset_id);

    std::vector<double> fractions = {0.0};
    fractions.insert(fractions.end(), config.subsample_fractions.begin(),
                     config.subsample_fractions.end());

    std::vector<BenchCell> cells;
    for (const auto& ds : dataset_ids)
        for (Modality m : config.modalities) {
            if (!tables.count(m)) continue;
            for (Task t : config.tasks)
                for (const auto& model : config.models)
                    for (Protocol p : config.protocols)
                        for (double f : fractions)
                            cells.push_back({ds, m, t, model, p, f});
        }

    struct CellResult {
        std::optional<EvalResult> result;
        std::string error;
    };
    std::vector<CellResult> outcomes(cells.size());

    const auto run_one = [&](std::size_t i) {
        const BenchCell& cell = cells[i];
        try {
            FeatureTable view;
            const FeatureTable& table = tables.at(cell.modality);
            view.columns = table.columns;
            for (const auto& r : table.rows)
                if (r.dataset_id == cell.dataset) view.rows.push_back(r);
            const ModelSpec spec = ModelSpec::from_name(cell.model, config.seed);
            EvalResult result =
                run_benchmark(view, cell.modality, cell.task, spec, cell.protocol,
                              config.rebalance, config.seed, cell.subsample_fraction);
            if (cell.subsample_fraction > 0.0)
                result.protocol += "@subsample=" + format_value(cell.subsample_fraction);
            outcomes[i].result = std::move(result);
        } catch (const std::exception& e) {
            outcomes[i].error = cell.dataset + "/" + to_string(cell.modality) + "/" +
                                to_string(cell.task) + "/" + cell.model + ": " + e.what();
        }
    };

    const int workers = std::max(1, config.workers);
    if (workers == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::future<void>> pool;
        for (int w = 0; w < workers; ++w)
            pool.push_back(std::async(std::launch::async, [&] {
                for (std::size_t i = next++; i < cells.size(); i = next++) run_one(i);
            }));
        for (auto& f : pool) f.get();
    }

    BenchOutput out;
    for (auto& o : outcomes) {
        if (o.result)
            out.results.push_back(std::move(*o.result));
        else
            out.cell_errors.push_back(std::move(o.error));
    }
    if (!out.results.empty()) {
        // rankings compare full-training-data results only
        std::vector<EvalResult> full;
        for (const auto& r : out.results)
            if (r.protocol.find("@subsample=") == std::string::npos) full.push_back(r);
        if (!full.empty()) out.rankings = rank_results(full);
    }
    return out;
}

std::vector<CohortGroup> build_cohort_groups(const std::vector<DatasetSpecification>& specs,
                                             CohortDimension dimension) {
    std::map<std::string, CohortGroup> groups;
    const auto group_for = [&](const std::string& value) -> CohortGroup& {
        auto [it, fresh] = groups.try_emplace(value);
        if (fresh) {
            it->second.dimension = dimension;
            it->second.value = value;
        }
        return it->second;
    };

    for (const auto& spec : specs) {
        const auto& d = spec.descriptor;
        switch (dimension) {
            case CohortDimension::Setting:
                group_for(to_string(d.setting)).datasets.insert(d.name);
                break;
            case CohortDimension::Device:
                group_for(to_string(d.device)).datasets.insert(d.name);
                break;
            case CohortDimension::Labeling:
                group_for(to_string(d.labeling)).datasets.insert(d.name);
                break;
            case CohortDimension::Gender:
                for (const auto& p : d.participants)
                    if (p.gender)
                        group_for(to_string(*p.gender))
                            .participants.insert(d.name + "/" + p.participant_id);
                break;
            case CohortDimension::Age:
                for (const auto& p : d.participants)
                    if (p.age_years)
                        group_for(age_group(*p.age_years))
                            .participants.insert(d.name + "/" + p.participant_id);
                break;
        }
    }

    std::vector<CohortGroup> out;
    for (auto& [value, g] : groups) out.push_back(std::move(g));
    return out;
}

std::vector<EvalResult> run_cross_matrix(const FeatureTable& features,
                                         const std::vector<CohortGroup>& groups,
                                         Modality modality, Task task,
                                         const ModelSpec& model_spec,
                                         const RebalancePolicy& policy, std::uint64_t seed,
                                         std::vector<std::string>* errors) {
    const auto note = [&](const std::string& msg) {
        if (errors) errors->push_back(msg);
    };
    std::vector<EvalResult> results;
    for (const auto& train : groups)
        for (const auto& test : groups) {
            if (&train == &test) continue;
            try {
                results.push_back(cross_cohort_eval(features, train, test, modality, task,
                                                    model_spec, policy, seed));
            } catch (const Error& e) {
                note(train.value + "->" + test.value + ": " + e.what());
            }
        }
    for (const auto& group : groups) {
        if (group.demographic() || group.datasets.size() < 2) continue;
        try {
            auto lodo = lodo_eval(features, group, modality, task, model_spec, policy, seed);
            results.insert(results.end(), lodo.begin(), lodo.end());
        } catch (const Error& e) {
            note("lodo " + group.value + ": " + e.what());
        }
    }
    return results;
}

std::string results_to_json(const std::vector<EvalResult>& results) {
    json out = json::array();
    for (const auto& r : results) {
        json j;
        j["datasets"] = r.datasets;
        j["modality"] = to_string(r.modality);
        j["task"] = to_string(r.task);
        j["model"] = r.model_kind;
        j["protocol"] = r.protocol;
        if (!r.train_cohort.empty()) j["train_cohort"] = r.train_cohort;
        if (!r.test_cohort.empty()) j["test_cohort"] = r.test_cohort;
        j["seed"] = r.seed;
        j["mean_accuracy"] = r.mean_accuracy;
        j["std_accuracy"] = r.std_accuracy;
        j["mean_f1"] = r.mean_f1;
        j["std_f1"] = r.std_f1;
        j["warnings"] = r.warnings;
        json folds = json::array();
        for (std::size_t i = 0; i < r.folds.size(); ++i) {
            const auto& fm = r.folds[i];
            json fj;
            fj["accuracy"] = fm.accuracy;
            fj["macro_f1"] = fm.macro_f1;
            fj["test_rows"] = fm.test_rows;
            json conf = json::array();
            for (Eigen::Index a = 0; a < fm.confusion.rows(); ++a) {
                json row = json::array();
                for (Eigen::Index b = 0; b < fm.confusion.cols(); ++b)
                    row.push_back(fm.confusion(a, b));
                conf.push_back(std::move(row));
            }
            fj["confusion"] = std::move(conf);
            if (i < r.fold_defs.size()) {
                fj["train_participants"] = r.fold_defs[i].train_participants;
                fj["test_participants"] = r.fold_defs[i].test_participants;
            }
            folds.push_back(std::move(fj));
        }
        j["folds"] = std::move(folds);
        out.push_back(std::move(j));
    }
    return out.dump(2);
}

void write_signal_file(std::ostream& out, const std::vector<RawSignalRecord>& records) {
    out << "participant_id,recording_id,t_s,value\n";
    for (const auto& r : records) {
        const double t0 = r.start_time_s.value_or(0.0);
        for (std::size_t i = 0; i < r.samples.size(); ++i) {
            const double t = t0 + static_cast<double>(i) / r.sampling_rate_hz;
            out << r.participant_id << ',' << r.recording_id << ',' << format_value(t) << ','
                << format_value(r.samples[i]) << '\n';
        }
    }
}

void write_annotation_file(std::ostream& out, const std::vector<AnnotationRecord>& annotations) {
    out << "participant_id,kind,task,start_s,end_s,time_s,arousal,valence,scale_min,scale_max,"
           "tags\n";
    for (const auto& a : annotations) {
        std::vector<std::string> cells(11);
        cells[0] = a.participant_id;
        switch (a.kind) {
            case AnnotationRecord::Kind::TaskInterval:
                cells[1] = "task_interval";
                cells[2] = a.task;
                cells[3] = format_value(a.start_s);
                cells[4] = format_value(a.end_s);
                out << join_csv(cells) << '\n';
                break;
            case AnnotationRecord::Kind::ContinuousRating:
                cells[1] = "continuous_rating";
                cells[8] = format_value(a.scale_min);
                cells[9] = format_value(a.scale_max);
                for (std::size_t i = 0; i < a.times_s.size(); ++i) {
                    cells[5] = format_value(a.times_s[i]);
                    cells[6] = format_value(a.arousal_values[i]);
                    cells[7] = format_value(a.valence_values[i]);
                    out << join_csv(cells) << '\n';
                }
                break;
            case AnnotationRecord::Kind::DiscreteRating:
                cells[1] = "discrete_rating";
                cells[2] = a.task;
                cells[5] = format_value(a.time_s);
                cells[6] = format_value(a.arousal_value);
                cells[7] = format_value(a.valence_value);
                cells[8] = format_value(a.scale_min);
                cells[9] = format_value(a.scale_max);
                out << join_csv(cells) << '\n';
                break;
            case AnnotationRecord::Kind::EventFlag: {
                cells[1] = "event_flag";
                cells[5] = format_value(a.time_s);
                std::string tags;
                for (const auto& t : a.tags) tags += (tags.empty() ? "" : ";") + t;
                cells[10] = tags;
                out << join_csv(cells) << '\n';
                break;
            }
        }
    }
}

DatasetConfig write_corpus_files(const SynthCorpus& corpus, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    const auto open = [](const fs::path& path) {
        std::ofstream out(path);
        if (!out) throw Error("cannot write " + path.string());
        return out;
    };

    std::vector<RawSignalRecord> eda, ppg;
    for (const auto& r : corpus.records)
        (r.modality == Modality::EDA ? eda : ppg).push_back(r);

    DatasetConfig config;
    config.id = corpus.descriptor.name;
    config.config_path = (fs::path(dir) / "dataset.json").string();
    config.eda_signal_path = (fs::path(dir) / "eda.csv").string();
    config.ppg_signal_path = (fs::path(dir) / "ppg.csv").string();
    config.annotation_path = (fs::path(dir) / "annotations.csv").string();

    {
        auto out = open(config.eda_signal_path);
        write_signal_file(out, eda);
    }
    {
        auto out = open(config.ppg_signal_path);
        write_signal_file(out, ppg);
    }
    {
        auto out = open(config.annotation_path);
        write_annotation_file(out, corpus.annotations);
    }
    {
        DatasetSpecification spec;
        spec.descriptor = corpus.descriptor;
        spec.scheme = corpus.scheme;
        spec.segmentation = "task";
        auto out = open(config.config_path);
        out << dataset_spec_to_json(spec) << '\n';
    }
    return config;
}

void write_segment_manifest(std::ostream& out, const SegmentStore& store) {
    out << "segment_id,dataset_id,participant_id,provenance,modalities,samples,arousal,valence,"
           "quadrant\n";
    for (const auto& seg : store.segments) {
        std::string modalities;
        std::size_t samples = 0;
        for (const auto& s : seg.slices) {
            modalities += (modalities.empty() ? "" : ";") + std::string(to_string(s.modality));
            samples += s.samples.size();
        }
        out << join_csv({seg.segment_id, seg.dataset_id, seg.participant_id,
                         seg.provenance.to_string(), modalities, std::to_string(samples),
                         seg.labels ? to_string(seg.labels->arousal) : "",
                         seg.labels ? to_string(seg.labels->valence) : "",
                         seg.labels ? to_string(seg.labels->quadrant) : ""})
            << '\n';
    }
    for (const auto& w : store.warnings) out << "# warning: " << w << '\n';
}

}  // namespace afb
