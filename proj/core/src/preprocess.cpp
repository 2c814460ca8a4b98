#include "affectbench/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>

#include "affectbench/csvio.hpp"
#include "affectbench/rng.hpp"

namespace afb {

const char* to_string(Task t) {
    switch (t) {
        case Task::ArousalTask: return "arousal";
        case Task::ValenceTask: return "valence";
        case Task::QuadrantTask: return "quadrant";
    }
    return "?";
}

Task task_from_string(const std::string& s) {
    if (s == "arousal") return Task::ArousalTask;
    if (s == "valence") return Task::ValenceTask;
    if (s == "quadrant") return Task::QuadrantTask;
    throw Error("unknown task: " + s);
}

std::vector<Window> window_signal(std::span<const double> samples, std::size_t window_size,
                                  double overlap_fraction) {
    if (window_size < 2) throw Error("window_size must be >= 2");
    if (overlap_fraction < 0.0 || overlap_fraction >= 1.0)
        throw Error("overlap_fraction must be in [0, 1)");
    const std::size_t stride = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(window_size * (1.0 - overlap_fraction))));
    const std::size_t n = samples.size();

    std::vector<Window> out;
    auto emit = [&](std::size_t start, std::size_t real_len) {
        Window w;
        w.window_index = static_cast<int>(out.size());
        w.start_sample = start;
        w.samples.assign(samples.begin() + static_cast<long>(start),
                         samples.begin() + static_cast<long>(start + real_len));
        w.samples.resize(window_size, 0.0);
        w.padded = real_len < window_size;
        out.push_back(std::move(w));
    };

    if (n < window_size) {
        emit(0, n);
        return out;
    }
    std::size_t start = 0;
    while (start + window_size <= n) {
        emit(start, window_size);
        start += stride;
    }
    // Trailing remainder at least one stride long gets zero-padded.
    if (start < n && n - start >= stride) emit(start, n - start);
    return out;
}

static std::string participant_key(const FeatureRow& r) {
    return r.dataset_id + "\x1f" + r.participant_id;
}

FeatureTable impute_features(const FeatureTable& table) {
    FeatureTable out = table;
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < out.rows.size(); ++i)
        groups[participant_key(out.rows[i])].push_back(i);

    for (auto& [key, idx] : groups) {
        for (std::size_t c = 0; c < out.columns.size(); ++c) {
            std::vector<double> finite;
            for (std::size_t i : idx) {
                const double v = out.rows[i].values[c];
                if (std::isfinite(v)) finite.push_back(v);
            }
            double fill = 0.0;
            if (!finite.empty()) {
                std::sort(finite.begin(), finite.end());
                const std::size_t m = finite.size();
                fill = (m % 2) ? finite[m / 2] : 0.5 * (finite[m / 2 - 1] + finite[m / 2]);
            }
            for (std::size_t i : idx) {
                double& v = out.rows[i].values[c];
                if (!std::isfinite(v)) v = fill;
            }
        }
    }
    return out;
}

FeatureTable minmax_normalize(const FeatureTable& table) {
    if (table.rows.empty()) throw Error("minmax_normalize: empty table");
    FeatureTable out = table;
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < out.rows.size(); ++i)
        groups[participant_key(out.rows[i])].push_back(i);

    for (auto& [key, idx] : groups) {
        for (std::size_t c = 0; c < out.columns.size(); ++c) {
            double lo = out.rows[idx[0]].values[c];
            double hi = lo;
            for (std::size_t i : idx) {
                lo = std::min(lo, out.rows[i].values[c]);
                hi = std::max(hi, out.rows[i].values[c]);
            }
            const double range = hi - lo;
            for (std::size_t i : idx) {
                double& v = out.rows[i].values[c];
                v = range > 0.0 ? (v - lo) / range : 0.0;
            }
        }
    }
    return out;
}

std::vector<double> zscore_normalize(std::span<const double> samples) {
    if (samples.size() < 2) throw Error("zscore_normalize: need at least 2 samples");
    const double n = static_cast<double>(samples.size());
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    double var = 0.0;
    for (double x : samples) var += (x - mean) * (x - mean);
    var /= n;  // population variance
    const double sd = std::sqrt(var);
    std::vector<double> out(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        out[i] = sd > 0.0 ? (samples[i] - mean) / sd : 0.0;
    return out;
}

static std::map<int, std::size_t> class_counts(const std::vector<int>& labels) {
    std::map<int, std::size_t> counts;
    for (int l : labels) ++counts[l];
    return counts;
}

bool imbalance_exceeds_one_third(const std::vector<int>& labels) {
    const auto counts = class_counts(labels);
    if (counts.size() < 2) throw Error("degenerate label distribution");
    std::size_t lo = SIZE_MAX, hi = 0;
    for (const auto& [l, c] : counts) {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    // strict: (hi - lo)/hi > 1/3, in integers
    return 3 * (hi - lo) > hi;
}

static std::vector<int> table_labels(const FeatureTable& table, Task task) {
    std::vector<int> labels;
    labels.reserve(table.rows.size());
    for (const auto& r : table.rows) labels.push_back(label_of(r.labels, task));
    return labels;
}

FeatureTable random_oversample(const FeatureTable& table, Task task, std::uint64_t seed) {
    const auto labels = table_labels(table, task);
    const auto counts = class_counts(labels);
    if (counts.size() < 2) throw Error("degenerate label distribution");
    std::size_t target = 0;
    for (const auto& [l, c] : counts) target = std::max(target, c);

    FeatureTable out = table;
    Rng rng = Rng::derive(seed, "oversample");
    for (const auto& [cls, count] : counts) {
        if (count == target) continue;
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == cls) members.push_back(i);
        for (std::size_t need = target - count; need > 0; --need)
            out.rows.push_back(table.rows[members[rng.index(members.size())]]);
    }
    return out;
}

FeatureTable smote(const FeatureTable& table, Task task, int k, std::uint64_t seed) {
    const auto labels = table_labels(table, task);
    const auto counts = class_counts(labels);
    if (counts.size() < 2) throw Error("degenerate label distribution");
    std::size_t target = 0;
    for (const auto& [l, c] : counts) target = std::max(target, c);

    FeatureTable out = table;
    Rng rng = Rng::derive(seed, "smote");
    for (const auto& [cls, count] : counts) {
        if (count == target) continue;
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == cls) members.push_back(i);
        if (members.size() < 2) {
            // too few rows to interpolate; duplicate instead
            for (std::size_t need = target - count; need > 0; --need)
                out.rows.push_back(table.rows[members[rng.index(members.size())]]);
            continue;
        }
        const int kp = std::min<int>(k, static_cast<int>(members.size()) - 1);
        for (std::size_t need = target - count; need > 0; --need) {
            const std::size_t xi = members[rng.index(members.size())];
            const auto& x = table.rows[xi].values;
            // k nearest minority neighbors of x (excluding itself)
            std::vector<std::pair<double, std::size_t>> dists;
            for (std::size_t mi : members) {
                if (mi == xi) continue;
                const auto& z = table.rows[mi].values;
                double d2 = 0.0;
                for (std::size_t c = 0; c < x.size(); ++c)
                    d2 += (x[c] - z[c]) * (x[c] - z[c]);
                dists.push_back({d2, mi});
            }
            std::sort(dists.begin(), dists.end());
            const std::size_t zi = dists[rng.index(static_cast<std::size_t>(kp))].second;
            const auto& z = table.rows[zi].values;
            const double u = rng.uniform();
            FeatureRow syn = table.rows[xi];
            syn.segment_id += "#smote" + std::to_string(out.rows.size());
            for (std::size_t c = 0; c < x.size(); ++c) syn.values[c] = x[c] + u * (z[c] - x[c]);
            out.rows.push_back(std::move(syn));
        }
    }
    return out;
}

static std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_feature_table(std::ostream& out, const FeatureTable& table) {
    std::vector<std::string> header = {"dataset_id", "participant_id", "segment_id"};
    header.insert(header.end(), table.columns.begin(), table.columns.end());
    header.insert(header.end(), {"arousal", "valence", "quadrant"});
    out << join_csv(header) << '\n';
    for (const auto& r : table.rows) {
        std::vector<std::string> cells = {r.dataset_id, r.participant_id, r.segment_id};
        for (double v : r.values) cells.push_back(format_value(v));
        cells.push_back(to_string(r.labels.arousal));
        cells.push_back(to_string(r.labels.valence));
        cells.push_back(to_string(r.labels.quadrant));
        out << join_csv(cells) << '\n';
    }
}

FeatureTable read_feature_table(std::istream& in) {
    FeatureTable table;
    std::string line;
    int lineno = 0;
    bool have_header = false;
    std::size_t n_features = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        {
            std::string cur;
            for (char c : line) {
                if (c == ',') {
                    cells.push_back(cur);
                    cur.clear();
                } else if (c != '\r') {
                    cur.push_back(c);
                }
            }
            cells.push_back(cur);
        }
        if (!have_header) {
            if (cells.size() < 6 || cells[0] != "dataset_id")
                throw Error("feature table: bad header");
            n_features = cells.size() - 6;
            table.columns.assign(cells.begin() + 3, cells.end() - 3);
            have_header = true;
            continue;
        }
        if (cells.size() != n_features + 6)
            throw Error("feature table line " + std::to_string(lineno) + ": wrong cell count");
        FeatureRow r;
        r.dataset_id = cells[0];
        r.participant_id = cells[1];
        r.segment_id = cells[2];
        for (std::size_t i = 0; i < n_features; ++i)
            r.values.push_back(parse_number(cells[3 + i], lineno));
        r.labels = LabelSet::make(arousal_from_string(cells[3 + n_features]),
                                  valence_from_string(cells[4 + n_features]));
        table.rows.push_back(std::move(r));
    }
    if (!have_header) throw Error("feature table: empty file");
    return table;
}

}  // namespace afb
