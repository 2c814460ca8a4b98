#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "affectbench/eval.hpp"
#include "affectbench/rng.hpp"

using namespace afb;

namespace {

// Brute-force per-class F1 over classes present in either vector; the
// independent oracle for the metric implementation.
double brute_force_f1(const std::vector<int>& yt, const std::vector<int>& yp) {
    std::set<int> classes(yt.begin(), yt.end());
    classes.insert(yp.begin(), yp.end());
    double sum = 0.0;
    for (int c : classes) {
        int tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < yt.size(); ++i) {
            if (yt[i] == c && yp[i] == c) ++tp;
            if (yt[i] != c && yp[i] == c) ++fp;
            if (yt[i] == c && yp[i] != c) ++fn;
        }
        const double precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
        const double recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
        sum += precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    }
    return sum / static_cast<double>(classes.size());
}

FeatureRow labeled_row(const std::string& pid, double x, Arousal a,
                       const std::string& dataset = "d0") {
    static int counter = 0;
    FeatureRow r;
    r.dataset_id = dataset;
    r.participant_id = pid;
    r.segment_id = pid + "/" + std::to_string(counter++);
    r.values = {x, -x};
    r.labels = LabelSet::make(a, x > 0 ? Valence::Positive : Valence::Negative);
    return r;
}

// separable toy table: feature sign encodes arousal
FeatureTable toy_table(int participants, int per_class, std::uint64_t seed,
                       const std::string& dataset = "d0") {
    Rng rng(seed);
    FeatureTable t;
    t.columns = {"f0", "f1"};
    for (int p = 0; p < participants; ++p) {
        const std::string pid = dataset + "p" + std::to_string(p);
        for (int s = 0; s < per_class; ++s) {
            t.rows.push_back(labeled_row(pid, 1.0 + rng.uniform(), Arousal::High, dataset));
            t.rows.push_back(labeled_row(pid, -1.0 - rng.uniform(), Arousal::Low, dataset));
        }
    }
    return t;
}

}  // namespace

TEST_CASE("metrics match brute force on 1000 random label vectors") {
    Rng rng(1234);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n_classes = trial % 2 ? 4 : 2;
        const std::size_t n = 1 + rng.index(20);
        std::vector<int> yt, yp;
        for (std::size_t i = 0; i < n; ++i) {
            yt.push_back(static_cast<int>(rng.index(static_cast<std::size_t>(n_classes))));
            yp.push_back(static_cast<int>(rng.index(static_cast<std::size_t>(n_classes))));
        }
        CHECK(f1_score(yt, yp) == doctest::Approx(brute_force_f1(yt, yp)).epsilon(1e-12));

        std::size_t hits = 0;
        for (std::size_t i = 0; i < n; ++i) hits += yt[i] == yp[i];
        CHECK(accuracy_score(yt, yp) ==
              doctest::Approx(static_cast<double>(hits) / static_cast<double>(n)));
    }
}

TEST_CASE("empty-denominator classes score zero in macro f1") {
    // class 1 never predicted and never true -> not in the union; class 2
    // predicted but never true -> f1 contribution 0
    CHECK(f1_score({0, 0}, {0, 2}) == doctest::Approx((2.0 / 3.0 + 0.0) / 2.0));
}

TEST_CASE("confusion matrix counts true-by-predicted pairs") {
    const auto m = confusion_matrix({0, 0, 1, 1}, {0, 1, 1, 1}, 2);
    CHECK(m(0, 0) == 1);
    CHECK(m(0, 1) == 1);
    CHECK(m(1, 0) == 0);
    CHECK(m(1, 1) == 2);
}

TEST_CASE("loso folds hold out each participant exactly once") {
    const std::vector<std::string> ps = {"c", "a", "b"};
    const auto folds = loso_folds(ps);
    REQUIRE(folds.size() == 3);
    CHECK(*folds[0].test_participants.begin() == "a");  // sorted order
    for (const auto& f : folds) {
        CHECK(f.test_participants.size() == 1);
        CHECK(f.train_participants.size() == 2);
        for (const auto& p : f.test_participants) CHECK(f.train_participants.count(p) == 0);
    }
    CHECK_THROWS_AS(loso_folds({"only"}), Error);
}

TEST_CASE("split-swap produces two folds with swapped roles") {
    const std::vector<std::string> ps = {"a", "b", "c", "d", "e"};
    const auto folds = split_swap_folds(ps, 42);
    REQUIRE(folds.size() == 2);
    CHECK(folds[0].train_participants == folds[1].test_participants);
    CHECK(folds[0].test_participants == folds[1].train_participants);
    CHECK(folds[0].train_participants.size() == 3);  // odd count: extra goes first

    // deterministic per seed
    const auto again = split_swap_folds(ps, 42);
    CHECK(again[0].train_participants == folds[0].train_participants);
}

TEST_CASE("subsampling keeps ceil(fraction * count) rows per class") {
    const auto t = toy_table(2, 5, 3);  // 10 high + 10 low
    const auto half = subsample_regime(t, Task::ArousalTask, 0.5, 42);
    std::map<int, int> c;
    for (const auto& r : half.rows) ++c[label_of(r.labels, Task::ArousalTask)];
    CHECK(c[0] == 5);
    CHECK(c[1] == 5);

    const auto third = subsample_regime(t, Task::ArousalTask, 0.34, 42);
    c.clear();
    for (const auto& r : third.rows) ++c[label_of(r.labels, Task::ArousalTask)];
    CHECK(c[0] == 4);  // ceil(0.34 * 10)
    CHECK(c[1] == 4);
}

TEST_CASE("loso benchmark on a separable toy problem is perfect and leak-free") {
    const auto t = toy_table(5, 4, 11);
    const auto result = run_benchmark(t, Modality::EDA, Task::ArousalTask,
                                      ModelSpec::from_name("lda"), Protocol::LOSO);
    CHECK(result.folds.size() == 5);
    CHECK(result.mean_f1 == doctest::Approx(1.0));
    CHECK(result.mean_accuracy == doctest::Approx(1.0));
    for (const auto& fold : result.fold_defs)
        for (const auto& p : fold.test_participants)
            CHECK(fold.train_participants.count(p) == 0);
}

TEST_CASE("benchmark results are deterministic per seed") {
    const auto t = toy_table(4, 3, 19);
    const auto a = run_benchmark(t, Modality::EDA, Task::ArousalTask,
                                 ModelSpec::from_name("rf"), Protocol::SplitSwap, {}, 7);
    const auto b = run_benchmark(t, Modality::EDA, Task::ArousalTask,
                                 ModelSpec::from_name("rf"), Protocol::SplitSwap, {}, 7);
    CHECK(a.mean_f1 == b.mean_f1);
    CHECK(a.mean_accuracy == b.mean_accuracy);
}

TEST_CASE("degenerate folds are skipped with warnings, all-skipped throws") {
    // one participant holds every High row: its LOSO fold trains on one class
    FeatureTable t;
    t.columns = {"f0", "f1"};
    for (int s = 0; s < 6; ++s) t.rows.push_back(labeled_row("rich", 1.0 + s, Arousal::High));
    for (int p = 0; p < 3; ++p)
        for (int s = 0; s < 2; ++s)
            t.rows.push_back(labeled_row("p" + std::to_string(p), -1.0 - s, Arousal::Low));

    const auto result = run_benchmark(t, Modality::EDA, Task::ArousalTask,
                                      ModelSpec::from_name("lda"), Protocol::LOSO);
    CHECK(result.warnings.size() == 1);
    CHECK(result.folds.size() == 3);

    // all participants single-class -> every fold degenerate
    FeatureTable hopeless;
    hopeless.columns = {"f0", "f1"};
    hopeless.rows = {labeled_row("a", 1.0, Arousal::High), labeled_row("b", 2.0, Arousal::High)};
    CHECK_THROWS_AS(run_benchmark(hopeless, Modality::EDA, Task::ArousalTask,
                                  ModelSpec::from_name("lda"), Protocol::LOSO),
                    Error);
}

TEST_CASE("cross-cohort evaluation rejects overlapping groups") {
    const auto t = toy_table(3, 3, 23, "d0");
    CohortGroup g0;
    g0.dimension = CohortDimension::Setting;
    g0.value = "lab";
    g0.datasets = {"d0"};
    CohortGroup g1 = g0;
    g1.value = "real";

    CHECK_THROWS_WITH_AS(cross_cohort_eval(t, g0, g1, Modality::EDA, Task::ArousalTask,
                                           ModelSpec::from_name("lda")),
                         "cohort leakage", Error);
}

TEST_CASE("cross-cohort transfer works across disjoint datasets") {
    auto t = toy_table(3, 3, 29, "d0");
    const auto other = toy_table(3, 3, 31, "d1");
    t.rows.insert(t.rows.end(), other.rows.begin(), other.rows.end());

    CohortGroup train, test;
    train.dimension = test.dimension = CohortDimension::Setting;
    train.value = "lab";
    train.datasets = {"d0"};
    test.value = "real";
    test.datasets = {"d1"};

    const auto result = cross_cohort_eval(t, train, test, Modality::EDA, Task::ArousalTask,
                                          ModelSpec::from_name("lda"));
    CHECK(result.protocol == "cross_cohort");
    CHECK(result.mean_f1 == doctest::Approx(1.0));
    CHECK(result.datasets == std::vector<std::string>{"d1"});
}

TEST_CASE("lodo holds out each dataset of the group once") {
    FeatureTable t;
    t.columns = {"f0", "f1"};
    for (const std::string ds : {"d0", "d1", "d2"}) {
        const auto part = toy_table(3, 2, 37 + ds.back(), ds);
        t.rows.insert(t.rows.end(), part.rows.begin(), part.rows.end());
    }
    CohortGroup group;
    group.dimension = CohortDimension::Setting;
    group.value = "lab";
    group.datasets = {"d0", "d1", "d2"};

    const auto results = lodo_eval(t, group, Modality::EDA, Task::ArousalTask,
                                   ModelSpec::from_name("lda"));
    REQUIRE(results.size() == 3);
    std::set<std::string> held_out;
    for (const auto& r : results) {
        CHECK(r.protocol == "lodo");
        REQUIRE(r.datasets.size() == 1);
        held_out.insert(r.datasets[0]);
    }
    CHECK(held_out == std::set<std::string>{"d0", "d1", "d2"});
}

TEST_CASE("rankings order datasets by best f1 with lexicographic tie-breaks") {
    EvalResult a;
    a.datasets = {"zeta"};
    a.modality = Modality::EDA;
    a.task = Task::ArousalTask;
    a.model_kind = "rf";
    a.mean_f1 = 0.7;
    EvalResult b = a;
    b.model_kind = "lda";
    b.mean_f1 = 0.7;  // tie on zeta: lda wins by name
    EvalResult c = a;
    c.datasets = {"alpha"};
    c.model_kind = "mlp";
    c.mean_f1 = 0.9;
    EvalResult d = c;
    d.datasets = {"beta"};
    d.model_kind = "rf";  // equal f1 to alpha: alpha ranks first by name

    const auto tables = rank_results({a, b, c, d});
    REQUIRE(tables.size() == 1);
    const auto& t = tables[0];
    REQUIRE(t.entries.size() == 3);
    CHECK(t.entries[0].dataset == "alpha");
    CHECK(t.entries[1].dataset == "beta");
    CHECK(t.entries[2].dataset == "zeta");
    CHECK(t.entries[2].best_model == "lda");
    CHECK(t.min_f1 == doctest::Approx(0.7));
    CHECK(t.max_f1 == doctest::Approx(0.9));
    CHECK(t.avg_f1 == doctest::Approx((0.9 + 0.9 + 0.7) / 3.0));
}

TEST_CASE("ranking render has one row per dataset plus the summary block") {
    EvalResult r;
    r.datasets = {"d0"};
    r.model_kind = "rf";
    r.mean_f1 = 0.5;
    const auto tables = rank_results({r});
    const std::string text = render_ranking(tables[0]);
    CHECK(text.find("1,d0,rf,") != std::string::npos);
    for (const char* tag : {"MIN", "MAX", "AVG", "STD"})
        CHECK(text.find(tag) != std::string::npos);
}
