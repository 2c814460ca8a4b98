#include "affectbench/eval.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "affectbench/rng.hpp"

namespace afb {

const char* to_string(Protocol p) { return p == Protocol::LOSO ? "loso" : "split_swap"; }

double accuracy_score(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.empty() || y_true.size() != y_pred.size())
        throw Error("accuracy_score: empty or mismatched inputs");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) hits += y_true[i] == y_pred[i];
    return static_cast<double>(hits) / static_cast<double>(y_true.size());
}

double f1_score(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.empty() || y_true.size() != y_pred.size())
        throw Error("f1_score: empty or mismatched inputs");
    std::set<int> classes(y_true.begin(), y_true.end());
    classes.insert(y_pred.begin(), y_pred.end());

    double sum = 0.0;
    for (int c : classes) {
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < y_true.size(); ++i) {
            const bool t = y_true[i] == c, p = y_pred[i] == c;
            tp += t && p;
            fp += !t && p;
            fn += t && !p;
        }
        const double denom = static_cast<double>(2 * tp + fp + fn);
        sum += denom > 0.0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;
    }
    return sum / static_cast<double>(classes.size());
}

Eigen::MatrixXi confusion_matrix(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                                 int n_classes) {
    Eigen::MatrixXi m = Eigen::MatrixXi::Zero(n_classes, n_classes);
    for (std::size_t i = 0; i < y_true.size(); ++i) ++m(y_true[i], y_pred[i]);
    return m;
}

std::vector<Fold> loso_folds(const std::vector<std::string>& participants) {
    if (participants.size() < 2) throw Error("loso_folds: need at least 2 participants");
    std::vector<std::string> sorted = participants;
    std::sort(sorted.begin(), sorted.end());
    std::vector<Fold> folds;
    for (const auto& held_out : sorted) {
        Fold f;
        f.protocol = "loso";
        f.test_participants.insert(held_out);
        for (const auto& p : sorted)
            if (p != held_out) f.train_participants.insert(p);
        folds.push_back(std::move(f));
    }
    return folds;
}

std::vector<Fold> split_swap_folds(const std::vector<std::string>& participants,
                                   std::uint64_t seed) {
    if (participants.size() < 2) throw Error("split_swap_folds: need at least 2 participants");
    std::vector<std::string> shuffled = participants;
    std::sort(shuffled.begin(), shuffled.end());
    Rng rng = Rng::derive(seed, "split_swap");
    rng.shuffle(shuffled);
    const std::size_t first_half = (shuffled.size() + 1) / 2;  // extra one goes first

    Fold a, b;
    a.protocol = b.protocol = "split_swap";
    for (std::size_t i = 0; i < shuffled.size(); ++i) {
        if (i < first_half) {
            a.train_participants.insert(shuffled[i]);
            b.test_participants.insert(shuffled[i]);
        } else {
            a.test_participants.insert(shuffled[i]);
            b.train_participants.insert(shuffled[i]);
        }
    }
    return {a, b};
}

FeatureTable subsample_regime(const FeatureTable& train_rows, Task task, double fraction,
                              std::uint64_t seed) {
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < train_rows.rows.size(); ++i)
        by_class[label_of(train_rows.rows[i].labels, task)].push_back(i);
    if (by_class.size() < 2) throw Error("subsample_regime: missing class");

    Rng rng = Rng::derive(seed, "subsample");
    FeatureTable out;
    out.columns = train_rows.columns;
    std::vector<std::size_t> picked;
    for (auto& [cls, members] : by_class) {
        const std::size_t keep = static_cast<std::size_t>(
            std::ceil(fraction * static_cast<double>(members.size())));
        rng.shuffle(members);
        for (std::size_t i = 0; i < keep && i < members.size(); ++i)
            picked.push_back(members[i]);
    }
    std::sort(picked.begin(), picked.end());  // original row order
    for (std::size_t i : picked) out.rows.push_back(train_rows.rows[i]);
    return out;
}

namespace {

void table_to_matrix(const FeatureTable& table, Task task, Eigen::MatrixXd& X,
                     std::vector<int>& y) {
    X.resize(static_cast<Eigen::Index>(table.rows.size()),
             static_cast<Eigen::Index>(table.columns.size()));
    y.clear();
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        for (std::size_t c = 0; c < table.columns.size(); ++c)
            X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                table.rows[i].values[c];
        y.push_back(label_of(table.rows[i].labels, task));
    }
}

FeatureTable rebalance_training(const FeatureTable& train, Task task,
                                const RebalancePolicy& policy, std::uint64_t seed) {
    std::vector<int> labels;
    for (const auto& r : train.rows) labels.push_back(label_of(r.labels, task));
    FeatureTable out = train;
    if (policy.smote_if_imbalanced && imbalance_exceeds_one_third(labels))
        out = smote(out, task, policy.smote_k, seed);
    if (policy.oversample) out = random_oversample(out, task, seed);
    return out;
}

struct CellOutcome {
    bool skipped = false;
    std::string warning;
    FoldMetrics metrics;
};

CellOutcome evaluate_cell(const FeatureTable& train, const FeatureTable& test, Task task,
                          const ModelSpec& spec, const RebalancePolicy& policy,
                          std::uint64_t fold_seed) {
    CellOutcome outcome;
    std::set<int> train_classes;
    for (const auto& r : train.rows) train_classes.insert(label_of(r.labels, task));
    if (train.rows.empty() || test.rows.empty() || train_classes.size() < 2) {
        outcome.skipped = true;
        outcome.warning = "fold skipped: degenerate train or empty test partition";
        return outcome;
    }
    const FeatureTable balanced = rebalance_training(train, task, policy, fold_seed);

    Eigen::MatrixXd x_train, x_test;
    std::vector<int> y_train, y_test;
    table_to_matrix(balanced, task, x_train, y_train);
    table_to_matrix(test, task, x_test, y_test);

    const auto model = train_model(spec, x_train, y_train);
    const auto pred = model->predict(x_test);

    outcome.metrics.accuracy = accuracy_score(y_test, pred.labels);
    outcome.metrics.macro_f1 = f1_score(y_test, pred.labels);
    outcome.metrics.confusion = confusion_matrix(y_test, pred.labels, n_classes(task));
    outcome.metrics.test_rows = test.rows.size();
    return outcome;
}

void aggregate(EvalResult& result) {
    std::vector<double> accs, f1s;
    for (const auto& f : result.folds) {
        accs.push_back(f.accuracy);
        f1s.push_back(f.macro_f1);
    }
    auto mean_std = [](const std::vector<double>& xs) {
        const double m =
            std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
        double v = 0.0;
        for (double x : xs) v += (x - m) * (x - m);
        return std::pair<double, double>{m, std::sqrt(v / static_cast<double>(xs.size()))};
    };
    std::tie(result.mean_accuracy, result.std_accuracy) = mean_std(accs);
    std::tie(result.mean_f1, result.std_f1) = mean_std(f1s);
}

FeatureTable filter_rows(const FeatureTable& table,
                         const std::function<bool(const FeatureRow&)>& keep) {
    FeatureTable out;
    out.columns = table.columns;
    for (const auto& r : table.rows)
        if (keep(r)) out.rows.push_back(r);
    return out;
}

bool in_cohort(const FeatureRow& r, const CohortGroup& g) {
    if (g.demographic())
        return g.participants.count(r.dataset_id + "/" + r.participant_id) > 0;
    return g.datasets.count(r.dataset_id) > 0;
}

}  // namespace

EvalResult run_benchmark(const FeatureTable& features, Modality modality, Task task,
                         const ModelSpec& model_spec, Protocol protocol,
                         const RebalancePolicy& policy, std::uint64_t seed,
                         double subsample_fraction) {
    EvalResult result;
    result.modality = modality;
    result.task = task;
    result.model_kind = model_spec.name();
    result.protocol = to_string(protocol);
    result.seed = seed;
    {
        std::set<std::string> ds;
        for (const auto& r : features.rows) ds.insert(r.dataset_id);
        result.datasets.assign(ds.begin(), ds.end());
    }

    std::set<std::string> participant_set;
    for (const auto& r : features.rows) participant_set.insert(r.participant_id);
    const std::vector<std::string> participants(participant_set.begin(), participant_set.end());

    const auto folds = protocol == Protocol::LOSO ? loso_folds(participants)
                                                  : split_swap_folds(participants, seed);
    int fold_id = 0;
    for (const auto& fold : folds) {
        // structural leakage check
        for (const auto& p : fold.test_participants)
            if (fold.train_participants.count(p))
                throw Error("protocol violation: participant in both partitions");

        FeatureTable train = filter_rows(features, [&](const FeatureRow& r) {
            return fold.train_participants.count(r.participant_id) > 0;
        });
        const FeatureTable test = filter_rows(features, [&](const FeatureRow& r) {
            return fold.test_participants.count(r.participant_id) > 0;
        });
        const std::uint64_t fold_seed =
            Rng::derive(seed, result.model_kind + "/" + std::to_string(fold_id)).next_u64();
        if (subsample_fraction > 0.0) {
            try {
                train = subsample_regime(train, task, subsample_fraction, fold_seed);
            } catch (const Error& e) {
                result.warnings.push_back(std::string("fold ") + std::to_string(fold_id) + ": " +
                                          e.what());
                ++fold_id;
                continue;
            }
        }
        const auto outcome = evaluate_cell(train, test, task, model_spec, policy, fold_seed);
        if (outcome.skipped) {
            result.warnings.push_back("fold " + std::to_string(fold_id) + ": " + outcome.warning);
        } else {
            result.fold_defs.push_back(fold);
            result.folds.push_back(outcome.metrics);
        }
        ++fold_id;
    }
    if (result.folds.empty()) throw Error("run_benchmark: all folds skipped");
    aggregate(result);
    return result;
}

EvalResult cross_cohort_eval(const FeatureTable& features, const CohortGroup& train_group,
                             const CohortGroup& test_group, Modality modality, Task task,
                             const ModelSpec& model_spec, const RebalancePolicy& policy,
                             std::uint64_t seed) {
    if (train_group.demographic() != test_group.demographic())
        throw Error("cross_cohort_eval: mismatched cohort dimensions");
    if (train_group.demographic()) {
        for (const auto& p : train_group.participants)
            if (test_group.participants.count(p)) throw Error("cohort leakage");
    } else {
        for (const auto& d : train_group.datasets)
            if (test_group.datasets.count(d)) throw Error("cohort leakage");
    }

    // normalize per participant before pooling so cohort scales stay comparable
    const FeatureTable normalized = minmax_normalize(features);
    const FeatureTable train = filter_rows(
        normalized, [&](const FeatureRow& r) { return in_cohort(r, train_group); });
    const FeatureTable test = filter_rows(
        normalized, [&](const FeatureRow& r) { return in_cohort(r, test_group); });

    EvalResult result;
    result.modality = modality;
    result.task = task;
    result.model_kind = model_spec.name();
    result.protocol = "cross_cohort";
    result.train_cohort = std::string(to_string(train_group.dimension)) + ":" + train_group.value;
    result.test_cohort = std::string(to_string(test_group.dimension)) + ":" + test_group.value;
    result.seed = seed;
    {
        std::set<std::string> ds;
        for (const auto& r : test.rows) ds.insert(r.dataset_id);
        result.datasets.assign(ds.begin(), ds.end());
    }

    const auto outcome = evaluate_cell(train, test, task, model_spec, policy,
                                       Rng::derive(seed, "cross").next_u64());
    if (outcome.skipped) throw Error("cross_cohort_eval: " + outcome.warning);
    Fold fold;
    fold.protocol = "cross_cohort";
    for (const auto& r : train.rows) fold.train_participants.insert(r.dataset_id + "/" + r.participant_id);
    for (const auto& r : test.rows) fold.test_participants.insert(r.dataset_id + "/" + r.participant_id);
    result.fold_defs.push_back(std::move(fold));
    result.folds.push_back(outcome.metrics);
    aggregate(result);
    return result;
}

std::vector<EvalResult> lodo_eval(const FeatureTable& features, const CohortGroup& group,
                                  Modality modality, Task task, const ModelSpec& model_spec,
                                  const RebalancePolicy& policy, std::uint64_t seed) {
    if (group.datasets.size() < 2) throw Error("lodo_eval: need at least 2 datasets");
    std::vector<EvalResult> results;
    for (const auto& held_out : group.datasets) {
        CohortGroup train_group = group;
        train_group.datasets.erase(held_out);
        train_group.value = group.value + "\\" + held_out;
        CohortGroup test_group = group;
        test_group.datasets = {held_out};
        test_group.value = held_out;
        auto r = cross_cohort_eval(features, train_group, test_group, modality, task,
                                   model_spec, policy, seed);
        r.protocol = "lodo";
        results.push_back(std::move(r));
    }
    return results;
}

std::vector<RankingTable> rank_results(const std::vector<EvalResult>& results) {
    if (results.empty()) throw Error("rank_results: empty input");
    // (task, modality) -> dataset -> (model, f1)
    std::map<std::pair<int, int>, std::map<std::string, std::pair<std::string, double>>> best;
    for (const auto& r : results) {
        const auto key = std::make_pair(static_cast<int>(r.task), static_cast<int>(r.modality));
        std::string dataset;
        for (const auto& d : r.datasets) dataset += (dataset.empty() ? "" : "+") + d;
        auto it = best[key].find(dataset);
        if (it == best[key].end()) {
            best[key][dataset] = {r.model_kind, r.mean_f1};
        } else {
            auto& [model, f1] = it->second;
            if (r.mean_f1 > f1 || (r.mean_f1 == f1 && r.model_kind < model)) {
                model = r.model_kind;
                f1 = r.mean_f1;
            }
        }
    }

    std::vector<RankingTable> tables;
    for (const auto& [key, per_dataset] : best) {
        RankingTable t;
        t.task = static_cast<Task>(key.first);
        t.modality = static_cast<Modality>(key.second);
        for (const auto& [dataset, mb] : per_dataset)
            t.entries.push_back({dataset, mb.first, mb.second});
        std::sort(t.entries.begin(), t.entries.end(),
                  [](const RankingEntry& a, const RankingEntry& b) {
                      if (a.best_f1 != b.best_f1) return a.best_f1 > b.best_f1;
                      return a.dataset < b.dataset;
                  });
        std::vector<double> f1s;
        for (const auto& e : t.entries) f1s.push_back(e.best_f1);
        t.min_f1 = *std::min_element(f1s.begin(), f1s.end());
        t.max_f1 = *std::max_element(f1s.begin(), f1s.end());
        t.avg_f1 = std::accumulate(f1s.begin(), f1s.end(), 0.0) / static_cast<double>(f1s.size());
        double v = 0.0;
        for (double x : f1s) v += (x - t.avg_f1) * (x - t.avg_f1);
        t.std_f1 = std::sqrt(v / static_cast<double>(f1s.size()));
        tables.push_back(std::move(t));
    }
    return tables;
}

std::string render_ranking(const RankingTable& table) {
    std::ostringstream out;
    out << "# task=" << to_string(table.task) << " modality=" << to_string(table.modality)
        << "\n";
    out << "rank,dataset,best_model,best_f1\n";
    int rank = 1;
    for (const auto& e : table.entries)
        out << rank++ << ',' << e.dataset << ',' << e.best_model << ',' << e.best_f1 << '\n';
    out << "MIN,," << ',' << table.min_f1 << '\n';
    out << "MAX,," << ',' << table.max_f1 << '\n';
    out << "AVG,," << ',' << table.avg_f1 << '\n';
    out << "STD,," << ',' << table.std_f1 << '\n';
    return out.str();
}

}  // namespace afb
