#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <vector>

#include "csmell/learn/classifier.hpp"
#include "csmell/learn/evaluate.hpp"
#include "csmell/learn/metrics.hpp"
#include "csmell/rng.hpp"

using namespace csmell;

TEST_CASE("metrics: perfect predictions score one everywhere") {
    const std::vector<int> truth = {1, 0, 1, 0};
    const std::vector<double> scores = {0.9, 0.1, 0.8, 0.2};
    const Metrics m = compute_metrics(truth, truth, scores);
    CHECK(m.precision == Catch::Approx(1.0));
    CHECK(m.recall == Catch::Approx(1.0));
    CHECK(m.f_measure == Catch::Approx(1.0));
    CHECK(m.auc == Catch::Approx(1.0));
}

TEST_CASE("metrics: constant scores give AUC one half") {
    const std::vector<int> truth = {1, 0, 1, 0};
    const std::vector<int> pred = {1, 0, 0, 1};
    const std::vector<double> scores = {0.5, 0.5, 0.5, 0.5};
    CHECK(compute_metrics(truth, pred, scores).auc == Catch::Approx(0.5));
}

TEST_CASE("metrics: three of four positive-negative pairs correctly ordered") {
    const std::vector<int> truth = {1, 1, 0, 0};
    const std::vector<double> scores = {0.9, 0.4, 0.6, 0.1};
    const std::vector<int> pred = {1, 0, 1, 0};
    CHECK(compute_metrics(truth, pred, scores).auc == Catch::Approx(0.75));
}

TEST_CASE("metrics: weighted averages match a hand-computed confusion matrix") {
    // truth:  1 1 1 0 0 0 ; pred: 1 0 1 0 0 1
    // class1: tp=2 fp=1 fn=1 -> p=2/3 r=2/3 f=2/3 ; support 3
    // class0: tp=2 fp=1 fn=1 -> p=2/3 r=2/3 f=2/3 ; support 3
    const std::vector<int> truth = {1, 1, 1, 0, 0, 0};
    const std::vector<int> pred = {1, 0, 1, 0, 0, 1};
    const std::vector<double> scores = {0.9, 0.3, 0.8, 0.2, 0.1, 0.7};
    const Metrics m = compute_metrics(truth, pred, scores);
    CHECK(m.precision == Catch::Approx(2.0 / 3.0));
    CHECK(m.recall == Catch::Approx(2.0 / 3.0));
    CHECK(m.f_measure == Catch::Approx(2.0 / 3.0));
}

TEST_CASE("metrics: zero denominators produce zero, not NaN, and are counted") {
    const std::vector<int> truth = {1, 1, 1, 1};
    const std::vector<int> pred = {0, 0, 0, 0}; // never predicts the positive class
    const std::vector<double> scores = {0.1, 0.1, 0.1, 0.1};
    const Metrics m = compute_metrics(truth, pred, scores);
    CHECK(m.precision == 0.0);
    CHECK(m.recall == 0.0);
    CHECK(m.f_measure == 0.0);
    CHECK(m.zero_division_events > 0);
    CHECK(std::isfinite(m.auc));
}

TEST_CASE("metrics: AUC is invariant under strictly monotone score transforms") {
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> truth;
        std::vector<int> pred;
        std::vector<double> scores, transformed;
        for (int i = 0; i < 30; ++i) {
            truth.push_back(rng.bernoulli(0.4));
            pred.push_back(rng.bernoulli(0.5));
            const double s = rng.next_double();
            scores.push_back(s);
            transformed.push_back(std::exp(3.0 * s) + 7.0);
        }
        if (std::count(truth.begin(), truth.end(), 1) == 0 ||
            std::count(truth.begin(), truth.end(), 0) == 0)
            continue;
        const double a = compute_metrics(truth, pred, scores).auc;
        const double b = compute_metrics(truth, pred, transformed).auc;
        CHECK(a == Catch::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("metrics: empty input is an error") {
    CHECK_THROWS(compute_metrics({}, {}, {}));
}

namespace {

// single-feature rows around a threshold
void threshold_data(Matrix& x, std::vector<int>& y) {
    x.clear();
    y.clear();
    for (const double v : {0.1, 0.4, 0.45, 0.9, 1.2, 1.5}) {
        x.push_back({v});
        y.push_back(v > 0.6 ? 1 : 0);
    }
}

} // namespace

TEST_CASE("tree: depth-1 tree reproduces the best threshold split") {
    Matrix x;
    std::vector<int> y;
    threshold_data(x, y);
    DecisionTree tree;
    TreeParams params;
    params.max_depth = 1;
    tree.fit(x, y, params);

    // oracle: exhaustive search over midpoints for the largest Gini decrease
    std::vector<double> values;
    for (const auto& row : x) values.push_back(row[0]);
    std::sort(values.begin(), values.end());
    const auto gini = [](double pos, double n) {
        const double p = pos / n;
        return 1.0 - p * p - (1 - p) * (1 - p);
    };
    double best_gain = -1, best_threshold = 0;
    double pos_all = 0;
    for (const int v : y) pos_all += v;
    const double n = static_cast<double>(y.size());
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
        if (values[k] == values[k + 1]) continue;
        const double thr = (values[k] + values[k + 1]) / 2;
        double left_pos = 0, left_n = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i][0] <= thr) {
                left_pos += y[i];
                left_n += 1;
            }
        const double right_n = n - left_n;
        const double gain = gini(pos_all, n) - (left_n / n) * gini(left_pos, left_n) -
                            (right_n / n) * gini(pos_all - left_pos, right_n);
        if (gain > best_gain) {
            best_gain = gain;
            best_threshold = thr;
        }
    }
    CHECK(tree.root_feature() == 0);
    CHECK(tree.root_threshold() == Catch::Approx(best_threshold));
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(tree.predict(x[i]) == y[i]);
}

TEST_CASE("tree: min_leaf forbids splits that strand single rows") {
    Matrix x = {{0.0}, {1.0}, {2.0}, {3.0}};
    std::vector<int> y = {0, 0, 0, 1};
    DecisionTree tree;
    TreeParams params;
    params.min_leaf = 2;
    tree.fit(x, y, params);
    // the pure split (<=2.5) strands one row; the only legal split is <=1.5
    CHECK(tree.node_count() == 3);
    CHECK(tree.root_threshold() == Catch::Approx(1.5));

    // with three rows no split can respect min_leaf 2 at all
    DecisionTree stump;
    stump.fit({{0.0}, {1.0}, {2.0}}, {0, 0, 1}, params);
    CHECK(stump.node_count() == 1);
}

TEST_CASE("logistic regression separates linearly separable data") {
    Matrix x;
    std::vector<int> y;
    Rng rng(5);
    for (int i = 0; i < 40; ++i) {
        const double a = rng.normal(), b = rng.normal();
        x.push_back({a, b});
        y.push_back(a + b > 0 ? 1 : 0);
    }
    ClassifierSpec spec;
    spec.algorithm = Algorithm::logistic_regression;
    const Model m = Model::train(spec, x, y);
    int correct = 0;
    for (std::size_t i = 0; i < x.size(); ++i) correct += m.predict(x[i]) == y[i];
    CHECK(correct == static_cast<int>(x.size()));
}

TEST_CASE("gaussian naive bayes separates shifted clusters") {
    Matrix x;
    std::vector<int> y;
    Rng rng(6);
    for (int i = 0; i < 60; ++i) {
        const bool pos = i % 2 == 0;
        x.push_back({rng.normal(pos ? 3.0 : -3.0, 0.5), rng.normal(pos ? 2.0 : -2.0, 0.5)});
        y.push_back(pos);
    }
    ClassifierSpec spec;
    spec.algorithm = Algorithm::gaussian_naive_bayes;
    const Model m = Model::train(spec, x, y);
    int correct = 0;
    for (std::size_t i = 0; i < x.size(); ++i) correct += m.predict(x[i]) == y[i];
    CHECK(correct == static_cast<int>(x.size()));
}

TEST_CASE("training twice with the same spec and seed gives identical predictions") {
    Matrix x, held;
    std::vector<int> y;
    Rng rng(8);
    for (int i = 0; i < 50; ++i) {
        x.push_back({rng.normal(), rng.normal(), rng.normal()});
        y.push_back(rng.bernoulli(0.5));
    }
    for (int i = 0; i < 20; ++i) held.push_back({rng.normal(), rng.normal(), rng.normal()});

    for (const Algorithm algorithm :
         {Algorithm::decision_tree, Algorithm::random_forest, Algorithm::logistic_regression,
          Algorithm::gaussian_naive_bayes}) {
        ClassifierSpec spec;
        spec.algorithm = algorithm;
        spec.seed = 4242;
        if (algorithm == Algorithm::random_forest) spec.hyper_parameters["trees"] = 20;
        const Model a = Model::train(spec, x, y);
        const Model b = Model::train(spec, x, y);
        for (const auto& row : held) CHECK(a.score(row) == b.score(row));
    }
}

TEST_CASE("single-class training input is an error") {
    Matrix x = {{0.0}, {1.0}};
    std::vector<int> y = {1, 1};
    ClassifierSpec spec;
    CHECK_THROWS(Model::train(spec, x, y));
    CHECK_THROWS(Model::train(spec, {{0.0}}, {1}));
}

TEST_CASE("forest with one tree, full features and no bootstrap equals the plain tree") {
    Matrix x;
    std::vector<int> y;
    Rng rng(9);
    for (int i = 0; i < 40; ++i) {
        x.push_back({rng.normal(), rng.normal(), rng.normal(), rng.normal()});
        y.push_back(x.back()[1] > 0.2 ? 1 : 0);
    }
    ClassifierSpec forest_spec;
    forest_spec.algorithm = Algorithm::random_forest;
    forest_spec.hyper_parameters = {{"trees", 1},
                                    {"bootstrap", 0},
                                    {"mtry", 4},
                                    {"max_depth", 5},
                                    {"min_leaf", 1}};
    forest_spec.seed = 31;
    ClassifierSpec tree_spec;
    tree_spec.algorithm = Algorithm::decision_tree;
    tree_spec.hyper_parameters = {{"max_depth", 5}, {"min_leaf", 1}};
    const Model forest = Model::train(forest_spec, x, y);
    const Model tree = Model::train(tree_spec, x, y);
    for (const auto& row : x) CHECK(forest.score(row) == tree.score(row));
}

TEST_CASE("stratified folds keep the class ratio within one row") {
    Rng rng(12);
    std::vector<int> labels;
    for (int i = 0; i < 97; ++i) labels.push_back(rng.bernoulli(0.3));
    const int k = 10;
    const auto fold = stratified_folds(labels, k, 77);
    std::map<int, std::pair<int, int>> per_fold; // fold -> (pos, neg)
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto& [pos, neg] = per_fold[fold[i]];
        (labels[i] ? pos : neg)++;
    }
    int min_pos = 1 << 30, max_pos = 0, min_neg = 1 << 30, max_neg = 0;
    for (const auto& [f, counts] : per_fold) {
        min_pos = std::min(min_pos, counts.first);
        max_pos = std::max(max_pos, counts.first);
        min_neg = std::min(min_neg, counts.second);
        max_neg = std::max(max_neg, counts.second);
    }
    CHECK(max_pos - min_pos <= 1);
    CHECK(max_neg - min_neg <= 1);
}

namespace {

Dataset synthetic_dataset(int n, std::uint64_t seed, bool separable) {
    Dataset ds;
    Rng rng(seed);
    for (int i = 0; i < n; ++i) {
        DatasetRow r;
        r.developer = i;
        r.project = "p";
        const bool pos = rng.bernoulli(0.5);
        r.smelly_developer = pos;
        for (int f = 0; f < kFeatureCount; ++f) r.features[f] = rng.normal();
        if (separable) r.features[feature_index("IMP")] = pos ? rng.normal(3, 0.2) : rng.normal(-3, 0.2);
        ds.rows.push_back(std::move(r));
    }
    return ds;
}

} // namespace

TEST_CASE("grid search: a singleton grid returns its only point") {
    const Dataset ds = synthetic_dataset(40, 1, true);
    Matrix x;
    std::vector<int> y;
    extract_xy(ds, "smelly_developer", x, y);
    const auto result = grid_search(Algorithm::decision_tree, {{{"max_depth", 2}}}, x, y, 5);
    CHECK(result.best.hyper_parameters.at("max_depth") == 2);
}

TEST_CASE("grid search: interaction data prefers the deeper tree") {
    // XOR-style labels need depth 2+; depth 1 cannot split them
    Matrix x;
    std::vector<int> y;
    Rng rng(17);
    for (int i = 0; i < 80; ++i) {
        const double a = rng.bernoulli(0.5) ? 1.0 : 0.0;
        const double b = rng.bernoulli(0.5) ? 1.0 : 0.0;
        x.push_back({a + rng.normal(0, 0.05), b + rng.normal(0, 0.05)});
        y.push_back((a > 0.5) != (b > 0.5) ? 1 : 0);
    }
    const auto result = grid_search(Algorithm::decision_tree,
                                    {{{"max_depth", 1}}, {{"max_depth", 3}}}, x, y, 5);
    CHECK(result.best.hyper_parameters.at("max_depth") == 3);
}

TEST_CASE("grid search: small datasets reduce the fold count with a warning") {
    const Dataset ds = synthetic_dataset(6, 2, true);
    Matrix x;
    std::vector<int> y;
    extract_xy(ds, "smelly_developer", x, y);
    const auto result = grid_search(Algorithm::gaussian_naive_bayes, {{}}, x, y, 5);
    CHECK_FALSE(result.warnings.empty());
}

TEST_CASE("grid search: same seed, same winner") {
    const Dataset ds = synthetic_dataset(50, 3, false);
    Matrix x;
    std::vector<int> y;
    extract_xy(ds, "smelly_developer", x, y);
    const auto grid = default_grid(Algorithm::decision_tree);
    const auto a = grid_search(Algorithm::decision_tree, grid, x, y, 7);
    const auto b = grid_search(Algorithm::decision_tree, grid, x, y, 7);
    CHECK(a.best.hyper_parameters == b.best.hyper_parameters);
    CHECK(a.best_f_measure == b.best_f_measure);
}

TEST_CASE("cross-project evaluation: separable data reaches a median F of one") {
    const Dataset ds = synthetic_dataset(60, 4, true);
    ClassifierSpec spec;
    spec.algorithm = Algorithm::decision_tree;
    const EvalReport report = evaluate_cross_project(ds, "smelly_developer", spec, 11, 10, 10);
    CHECK(report.repetitions.size() == 10);
    CHECK(report.median_f_measure == Catch::Approx(1.0));
}

TEST_CASE("cross-project evaluation is deterministic for a fixed seed") {
    const Dataset ds = synthetic_dataset(50, 5, false);
    ClassifierSpec spec;
    spec.algorithm = Algorithm::random_forest;
    spec.hyper_parameters["trees"] = 10;
    const EvalReport a = evaluate_cross_project(ds, "smelly_developer", spec, 21, 3, 5);
    const EvalReport b = evaluate_cross_project(ds, "smelly_developer", spec, 21, 3, 5);
    CHECK(a.to_json().dump() == b.to_json().dump());
}

TEST_CASE("cross-project evaluation: absent class is an error") {
    Dataset ds = synthetic_dataset(20, 6, false);
    for (auto& r : ds.rows) r.smelly_quitter = 0;
    ClassifierSpec spec;
    CHECK_THROWS(evaluate_cross_project(ds, "smelly_quitter", spec, 1));
}

TEST_CASE("LOOCV: four separable rows give perfect pooled metrics") {
    Dataset ds;
    for (int i = 0; i < 4; ++i) {
        DatasetRow r;
        r.developer = i;
        r.project = "p";
        r.smelly_developer = i < 2;
        for (int f = 0; f < kFeatureCount; ++f) r.features[f] = 0;
        r.features[feature_index("IMP")] = i < 2 ? 5.0 : -5.0;
        ds.rows.push_back(r);
    }
    ds.project = "p";
    ds.cross_project = false;
    ClassifierSpec spec;
    spec.algorithm = Algorithm::gaussian_naive_bayes;
    const EvalReport report = evaluate_within_project(ds, "smelly_developer", spec);
    CHECK(report.median_f_measure == Catch::Approx(1.0));
}

TEST_CASE("LOOCV: one held-out prediction per row, metrics from a hand confusion matrix") {
    // six rows; IMP decides the label except row 5 which sits deep in the
    // negative cluster but is labeled positive, so every held-out prediction
    // can be traced by hand: {1,1,1,0,0,0} against truth {1,1,1,0,0,1}
    Dataset ds;
    const std::vector<int> labels = {1, 1, 1, 0, 0, 1};
    const std::vector<double> imp = {5.0, 5.1, 5.2, -4.0, -6.0, -9.0};
    for (int i = 0; i < 6; ++i) {
        DatasetRow r;
        r.developer = i;
        r.project = "p";
        r.smelly_developer = labels[static_cast<std::size_t>(i)];
        r.features[feature_index("IMP")] = imp[static_cast<std::size_t>(i)];
        ds.rows.push_back(r);
    }
    ds.cross_project = false;
    ds.project = "p";
    ClassifierSpec spec;
    spec.algorithm = Algorithm::decision_tree;
    const EvalReport report = evaluate_within_project(ds, "smelly_developer", spec);
    // class1: tp=3 fp=0 fn=1 -> p=1, r=3/4, f=6/7
    // class0: tp=2 fp=1 fn=0 -> p=2/3, r=1, f=4/5
    // weighted p = (4*1 + 2*(2/3))/6 = 8/9 ; weighted r = (4*(3/4) + 2*1)/6 = 5/6
    // weighted f = (4*(6/7) + 2*(4/5))/6
    const Metrics m = report.repetitions[0];
    CHECK(m.precision == Catch::Approx(8.0 / 9.0));
    CHECK(m.recall == Catch::Approx(5.0 / 6.0));
    CHECK(m.f_measure == Catch::Approx((24.0 / 7.0 + 8.0 / 5.0) / 6.0));
}

TEST_CASE("LOOCV: fewer than two rows is an error") {
    Dataset ds;
    DatasetRow r;
    r.developer = 0;
    r.project = "p";
    ds.rows.push_back(r);
    ClassifierSpec spec;
    CHECK_THROWS(evaluate_within_project(ds, "smelly_developer", spec));
}
