// affectbench: harmonize EDA/PPG datasets, extract features, and benchmark
// emotion-recognition models under subject-independent protocols.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "affectbench/pipeline.hpp"

namespace fs = std::filesystem;
using namespace afb;

namespace {

// 0 success, 1 config error, 2 input error, 3 empty pipeline stage,
// 4 all cells failed
enum ExitCode { kOk = 0, kConfigError = 1, kInputError = 2, kEmptyStage = 3, kAllFailed = 4 };

struct GlobalOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> out_dir;
};

RunConfig load_config_or_exit(const GlobalOpts& opts) {
    if (opts.config_path.empty()) {
        std::cerr << "error: --config is required for this command\n";
        std::exit(kConfigError);
    }
    RunConfig config;
    try {
        config = load_run_config(opts.config_path);
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        std::exit(kConfigError);
    }
    if (opts.seed) config.seed = *opts.seed;
    if (opts.workers) config.workers = *opts.workers;
    if (opts.out_dir) config.out_dir = *opts.out_dir;
    return config;
}

std::vector<LoadedDataset> load_datasets_or_exit(const RunConfig& config) {
    if (config.datasets.empty()) {
        std::cerr << "config error: no datasets configured\n";
        std::exit(kConfigError);
    }
    std::vector<LoadedDataset> out;
    for (const auto& dc : config.datasets) {
        try {
            out.push_back(load_dataset(dc));
        } catch (const Error& e) {
            std::cerr << "input error: dataset " << dc.id << ": " << e.what() << "\n";
            std::exit(kInputError);
        }
    }
    return out;
}

std::ofstream open_out(const fs::path& path) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        std::exit(kInputError);
    }
    return out;
}

std::vector<SegmentStore> build_all_segments(const std::vector<LoadedDataset>& datasets) {
    std::vector<SegmentStore> stores;
    for (const auto& ds : datasets) {
        try {
            stores.push_back(build_segments(ds));
        } catch (const Error& e) {
            std::cerr << "input error: dataset " << ds.spec.descriptor.name << ": " << e.what()
                      << "\n";
            std::exit(kInputError);
        }
    }
    return stores;
}

std::vector<Segment> pooled_segments(const std::vector<SegmentStore>& stores) {
    std::vector<Segment> all;
    for (const auto& s : stores) all.insert(all.end(), s.segments.begin(), s.segments.end());
    return all;
}

std::size_t count_missing(const FeatureTable& table) {
    std::size_t n = 0;
    for (const auto& r : table.rows)
        for (double v : r.values) n += !std::isfinite(v);
    return n;
}

std::map<Modality, FeatureTable> build_tables(const std::vector<Segment>& segments,
                                              const RunConfig& config, bool log) {
    std::map<Modality, FeatureTable> tables;
    for (Modality m : config.modalities) {
        FeatureTable raw = extract_feature_table(segments, m, config.artifact_mode);
        if (log)
            std::cout << to_string(m) << ": " << raw.rows.size() << " rows, "
                      << count_missing(raw) << " missing values imputed\n";
        tables[m] = finalize_feature_table(raw);
    }
    return tables;
}

int cmd_ingest(const GlobalOpts& opts) {
    const RunConfig config = load_config_or_exit(opts);
    const auto datasets = load_datasets_or_exit(config);
    const auto stores = build_all_segments(datasets);

    std::size_t total = 0;
    for (std::size_t i = 0; i < datasets.size(); ++i) {
        const std::string id = datasets[i].spec.descriptor.name;
        auto out = open_out(fs::path(config.out_dir) / (id + ".manifest.csv"));
        write_segment_manifest(out, stores[i]);
        std::cout << id << ": " << stores[i].segments.size() << " segments, "
                  << stores[i].warnings.size() << " warnings\n";
        total += stores[i].segments.size();
    }
    if (total == 0) {
        std::cerr << "error: ingest produced no segments\n";
        return kEmptyStage;
    }
    return kOk;
}

int cmd_features(const GlobalOpts& opts) {
    const RunConfig config = load_config_or_exit(opts);
    const auto datasets = load_datasets_or_exit(config);
    const auto segments = pooled_segments(build_all_segments(datasets));
    if (segments.empty()) {
        std::cerr << "error: no segments to extract features from\n";
        return kEmptyStage;
    }
    const auto tables = build_tables(segments, config, /*log=*/true);
    std::size_t total_rows = 0;
    for (const auto& [m, table] : tables) {
        auto out = open_out(fs::path(config.out_dir) /
                            (std::string(to_string(m)) + ".features.csv"));
        write_feature_table(out, table);
        total_rows += table.rows.size();
    }
    if (total_rows == 0) {
        std::cerr << "error: feature extraction produced no rows\n";
        return kEmptyStage;
    }
    return kOk;
}

int cmd_artifacts(const GlobalOpts& opts) {
    const RunConfig config = load_config_or_exit(opts);
    const auto datasets = load_datasets_or_exit(config);
    const auto stores = build_all_segments(datasets);

    std::vector<QualityRow> rows;
    for (std::size_t i = 0; i < datasets.size(); ++i)
        rows.push_back(quality_report(datasets[i], stores[i]));
    const std::string rendered = render_quality(rows);
    auto out = open_out(fs::path(config.out_dir) / "quality.txt");
    out << rendered;
    std::cout << rendered;
    return kOk;
}

int cmd_bench(const GlobalOpts& opts) {
    const RunConfig config = load_config_or_exit(opts);
    const auto datasets = load_datasets_or_exit(config);
    const auto segments = pooled_segments(build_all_segments(datasets));
    if (segments.empty()) {
        std::cerr << "error: no segments to benchmark\n";
        return kEmptyStage;
    }
    const auto tables = build_tables(segments, config, /*log=*/false);

    const BenchOutput output = run_full_benchmark(tables, config);
    for (const auto& e : output.cell_errors) std::cerr << "cell failed: " << e << "\n";
    if (output.results.empty()) {
        std::cerr << "error: every benchmark cell failed\n";
        return kAllFailed;
    }

    {
        auto out = open_out(fs::path(config.out_dir) / "results.json");
        out << results_to_json(output.results) << "\n";
    }
    {
        auto out = open_out(fs::path(config.out_dir) / "rankings.csv");
        for (const auto& t : output.rankings) out << render_ranking(t);
    }
    std::cout << output.results.size() << " cells completed, " << output.cell_errors.size()
              << " failed\n";
    return kOk;
}

int cmd_cross(const GlobalOpts& opts) {
    const RunConfig config = load_config_or_exit(opts);
    if (config.cohort_dimensions.empty()) {
        std::cerr << "config error: cross requires cohort_dimensions\n";
        return kConfigError;
    }
    const auto datasets = load_datasets_or_exit(config);
    const auto segments = pooled_segments(build_all_segments(datasets));
    if (segments.empty()) {
        std::cerr << "error: no segments for cohort evaluation\n";
        return kEmptyStage;
    }
    const auto tables = build_tables(segments, config, /*log=*/false);

    std::vector<DatasetSpecification> specs;
    for (const auto& ds : datasets) specs.push_back(ds.spec);

    std::vector<EvalResult> results;
    std::vector<std::string> errors;
    for (CohortDimension dim : config.cohort_dimensions) {
        const auto groups = build_cohort_groups(specs, dim);
        for (const auto& [m, table] : tables)
            for (Task task : config.tasks)
                for (const auto& model : config.models) {
                    const ModelSpec spec = ModelSpec::from_name(model, config.seed);
                    auto r = run_cross_matrix(table, groups, m, task, spec, config.rebalance,
                                              config.seed, &errors);
                    results.insert(results.end(), r.begin(), r.end());
                }
    }
    for (const auto& e : errors) std::cerr << "cell failed: " << e << "\n";
    if (results.empty()) {
        std::cerr << "error: every cohort cell failed\n";
        return kAllFailed;
    }
    auto out = open_out(fs::path(config.out_dir) / "cross_results.json");
    out << results_to_json(results) << "\n";
    std::cout << results.size() << " cohort cells completed, " << errors.size() << " failed\n";
    return kOk;
}

int cmd_report(const GlobalOpts& opts) {
    const RunConfig config = load_config_or_exit(opts);
    const fs::path store = fs::path(config.out_dir) / "results.json";
    std::ifstream in(store);
    if (!in) {
        std::cerr << "input error: no results store at " << store << " (run bench first)\n";
        return kInputError;
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << store << ": " << e.what() << "\n";
        return kInputError;
    }

    std::vector<EvalResult> results;
    for (const auto& rj : j) {
        EvalResult r;
        r.datasets = rj.at("datasets").get<std::vector<std::string>>();
        r.modality = modality_from_string(rj.at("modality"));
        r.task = task_from_string(rj.at("task"));
        r.model_kind = rj.at("model");
        r.protocol = rj.at("protocol");
        r.mean_f1 = rj.at("mean_f1");
        if (r.protocol.find("@subsample=") == std::string::npos) results.push_back(std::move(r));
    }
    if (results.empty()) {
        std::cerr << "error: results store holds no rankable results\n";
        return kEmptyStage;
    }
    for (const auto& t : rank_results(results)) std::cout << render_ranking(t);
    return kOk;
}

int cmd_synth(const GlobalOpts& opts, const SynthSpec& spec_in) {
    SynthSpec spec = spec_in;
    if (opts.seed) spec.seed = *opts.seed;
    const std::string out_dir = opts.out_dir.value_or("out");
    try {
        spec.validate();
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }

    const SynthCorpus corpus = generate_corpus(spec);
    const DatasetConfig dc = write_corpus_files(corpus, (fs::path(out_dir) / "synth").string());

    // ready-to-run config pointing at the generated corpus
    nlohmann::json run;
    run["datasets"] = {{{"id", dc.id},
                        {"config", dc.config_path},
                        {"eda_signal", dc.eda_signal_path},
                        {"ppg_signal", dc.ppg_signal_path},
                        {"annotations", dc.annotation_path}}};
    run["seed"] = spec.seed;
    run["out_dir"] = out_dir;
    auto out = open_out(fs::path(out_dir) / "synth.config.json");
    out << run.dump(2) << "\n";

    std::cout << "wrote corpus for " << spec.n_participants << " participants to " << out_dir
              << "/synth (run config: " << out_dir << "/synth.config.json)\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"affectbench: EDA/PPG emotion-recognition benchmarking"};
    app.require_subcommand(1);

    GlobalOpts opts;
    app.add_option("--config", opts.config_path, "Run configuration JSON");
    std::uint64_t seed_val = 0;
    int workers_val = 0;
    std::string out_val;
    auto* seed_opt = app.add_option("--seed", seed_val, "Override the global seed");
    auto* workers_opt = app.add_option("--workers", workers_val, "Override the worker count");
    auto* out_opt = app.add_option("--out", out_val, "Override the output directory");

    auto* ingest = app.add_subcommand("ingest", "Parse, segment, and label datasets");
    auto* features = app.add_subcommand("features", "Extract and normalize feature tables");
    auto* artifacts = app.add_subcommand("artifacts", "Artifact screening and label counts");
    auto* bench = app.add_subcommand("bench", "Run the full benchmark grid");
    auto* cross = app.add_subcommand("cross", "Cross-cohort transfer matrices");
    auto* report = app.add_subcommand("report", "Re-render rankings from a results store");

    SynthSpec synth_spec;
    auto* synth = app.add_subcommand("synth", "Generate the synthetic corpus");
    synth->add_option("--participants", synth_spec.n_participants, "Participant count");
    synth->add_option("--segments-per-quadrant", synth_spec.segments_per_quadrant,
                      "Segments per quadrant per participant");
    synth->add_option("--length", synth_spec.segment_length_s, "Segment length in seconds");
    synth->add_option("--injected-steps", synth_spec.injected_steps_per_participant,
                      "EDA step transients per participant");

    CLI11_PARSE(app, argc, argv);
    if (*seed_opt) opts.seed = seed_val;
    if (*workers_opt) opts.workers = workers_val;
    if (*out_opt) opts.out_dir = out_val;

    try {
        if (ingest->parsed()) return cmd_ingest(opts);
        if (features->parsed()) return cmd_features(opts);
        if (artifacts->parsed()) return cmd_artifacts(opts);
        if (bench->parsed()) return cmd_bench(opts);
        if (cross->parsed()) return cmd_cross(opts);
        if (report->parsed()) return cmd_report(opts);
        if (synth->parsed()) return cmd_synth(opts, synth_spec);
    } catch (const Error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    }
    return kConfigError;
}
