#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "csmell/features.hpp"
#include "csmell/learn/classifier.hpp"
#include "csmell/learn/metrics.hpp"
#include "csmell/rng.hpp"

namespace csmell {

// Seeded stratified fold assignment: within each class the (shuffled) rows
// are dealt round-robin, so per-fold class counts differ by at most one row.
inline std::vector<int> stratified_folds(const std::vector<int>& labels, int k,
                                         std::uint64_t seed) {
    std::vector<int> fold(labels.size(), 0);
    for (int cls = 0; cls < 2; ++cls) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == cls) idx.push_back(i);
        Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(cls)));
        rng.shuffle(idx);
        for (std::size_t i = 0; i < idx.size(); ++i)
            fold[idx[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    }
    return fold;
}

inline void extract_xy(const Dataset& ds, const std::string& class_name, Matrix& x,
                       std::vector<int>& y) {
    x.clear();
    y.clear();
    std::vector<int> feature_ids;
    for (const auto& name : ds.active_features) feature_ids.push_back(feature_index(name));
    for (const auto& row : ds.rows) {
        std::vector<double> v;
        v.reserve(feature_ids.size());
        for (const int f : feature_ids) v.push_back(row.features[f]);
        x.push_back(std::move(v));
        y.push_back(row.class_value(class_name));
    }
}

namespace detail {

// Falls back to a constant prediction when a training split is single-class;
// CV folds on tiny data can produce those, and a batch run must not abort.
struct FoldPrediction {
    std::vector<int> truth;
    std::vector<int> predicted;
    std::vector<double> scores;
};

inline FoldPrediction run_fold(const ClassifierSpec& spec, const Matrix& x,
                               const std::vector<int>& y, const std::vector<int>& fold,
                               int test_fold) {
    Matrix train_x;
    std::vector<int> train_y;
    FoldPrediction out;
    std::vector<std::size_t> test_idx;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (fold[i] == test_fold)
            test_idx.push_back(i);
        else {
            train_x.push_back(x[i]);
            train_y.push_back(y[i]);
        }
    }
    bool has0 = false, has1 = false;
    for (const int v : train_y) (v ? has1 : has0) = true;
    if (train_y.size() < 2 || !has0 || !has1) {
        const int constant = has1 ? 1 : 0;
        for (const std::size_t i : test_idx) {
            out.truth.push_back(y[i]);
            out.predicted.push_back(constant);
            out.scores.push_back(static_cast<double>(constant));
        }
        return out;
    }
    const Model model = Model::train(spec, train_x, train_y);
    for (const std::size_t i : test_idx) {
        out.truth.push_back(y[i]);
        const double s = model.score(x[i]);
        out.scores.push_back(s);
        out.predicted.push_back(s > 0.5 ? 1 : 0);
    }
    return out;
}

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

} // namespace detail

struct GridSearchResult {
    ClassifierSpec best;
    double best_f_measure = 0;
    std::vector<std::string> warnings;
};

// Exhaustive grid search scored by mean weighted F-Measure over seeded
// stratified 10-fold CV; ties keep the earlier grid point.
inline GridSearchResult grid_search(Algorithm algorithm,
                                    const std::vector<std::map<std::string, double>>& grid,
                                    const Matrix& x, const std::vector<int>& y,
                                    std::uint64_t seed) {
    if (grid.empty()) throw std::runtime_error("grid_search: empty grid");
    GridSearchResult out;
    int folds = 10;
    if (x.size() < 10) {
        folds = std::max<int>(2, static_cast<int>(x.size()));
        out.warnings.push_back("grid_search: only " + std::to_string(x.size()) +
                               " rows; folds reduced to " + std::to_string(folds));
    }
    const std::vector<int> fold = stratified_folds(y, folds, Rng::derive(seed, 7001));
    double best_score = -1.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        ClassifierSpec spec;
        spec.algorithm = algorithm;
        spec.hyper_parameters = grid[g];
        spec.seed = Rng::derive(seed, 9000 + g);
        double mean_f = 0;
        int counted = 0;
        for (int f = 0; f < folds; ++f) {
            const auto pred = detail::run_fold(spec, x, y, fold, f);
            if (pred.truth.empty()) continue;
            mean_f += compute_metrics(pred.truth, pred.predicted, pred.scores).f_measure;
            ++counted;
        }
        if (counted > 0) mean_f /= counted;
        if (mean_f > best_score + 1e-12) {
            best_score = mean_f;
            out.best = spec;
            out.best_f_measure = mean_f;
        }
    }
    return out;
}

struct EvalReport {
    std::string class_name;
    std::string scenario; // "cross" or "within:<project>"
    std::vector<Metrics> repetitions;
    std::vector<Metrics> folds; // raw per-fold metrics, kept for the stats stage
    double median_precision = 0, median_recall = 0, median_f_measure = 0, median_auc = 0;

    void finalize() {
        std::vector<double> p, r, f, a;
        for (const auto& m : repetitions) {
            p.push_back(m.precision);
            r.push_back(m.recall);
            f.push_back(m.f_measure);
            a.push_back(m.auc);
        }
        median_precision = detail::median(p);
        median_recall = detail::median(r);
        median_f_measure = detail::median(f);
        median_auc = detail::median(a);
    }

    nlohmann::json to_json() const {
        nlohmann::json reps = nlohmann::json::array();
        for (const auto& m : repetitions)
            reps.push_back({{"precision", m.precision},
                            {"recall", m.recall},
                            {"f_measure", m.f_measure},
                            {"auc", m.auc}});
        const auto span = [&](auto pick) {
            double lo = 1.0, hi = 0.0;
            for (const auto& m : repetitions) {
                lo = std::min(lo, pick(m));
                hi = std::max(hi, pick(m));
            }
            return nlohmann::json{{"min", repetitions.empty() ? 0.0 : lo},
                                  {"max", repetitions.empty() ? 0.0 : hi}};
        };
        return {{"class", class_name},
                {"scenario", scenario},
                {"repetitions", reps},
                {"median", {{"precision", median_precision},
                            {"recall", median_recall},
                            {"f_measure", median_f_measure},
                            {"auc", median_auc}}},
                {"range", {{"precision", span([](const Metrics& m) { return m.precision; })},
                           {"recall", span([](const Metrics& m) { return m.recall; })},
                           {"f_measure", span([](const Metrics& m) { return m.f_measure; })},
                           {"auc", span([](const Metrics& m) { return m.auc; })}}}};
    }
};

// 10 repetitions of seeded stratified 10-fold CV; each repetition reports the
// mean of its fold-level weighted metrics.
inline EvalReport evaluate_cross_project(const Dataset& ds, const std::string& class_name,
                                         const ClassifierSpec& spec, std::uint64_t seed,
                                         int repetitions = 10, int fold_count = 10) {
    Matrix x;
    std::vector<int> y;
    extract_xy(ds, class_name, x, y);
    bool has0 = false, has1 = false;
    for (const int v : y) (v ? has1 : has0) = true;
    if (!has0 || !has1)
        throw std::runtime_error("evaluate_cross_project: class " + class_name +
                                 " is absent or constant");

    EvalReport report;
    report.class_name = class_name;
    report.scenario = "cross";
    const int k = std::min<int>(fold_count, static_cast<int>(x.size()));
    for (int rep = 0; rep < repetitions; ++rep) {
        const std::uint64_t rep_seed = Rng::derive(seed, static_cast<std::uint64_t>(rep));
        const auto fold = stratified_folds(y, k, rep_seed);
        ClassifierSpec fold_spec = spec;
        Metrics rep_mean;
        int counted = 0;
        for (int f = 0; f < k; ++f) {
            fold_spec.seed = Rng::derive(rep_seed, 100 + static_cast<std::uint64_t>(f));
            const auto pred = detail::run_fold(fold_spec, x, y, fold, f);
            if (pred.truth.empty()) continue;
            const Metrics m = compute_metrics(pred.truth, pred.predicted, pred.scores);
            report.folds.push_back(m);
            rep_mean.precision += m.precision;
            rep_mean.recall += m.recall;
            rep_mean.f_measure += m.f_measure;
            rep_mean.auc += m.auc;
            rep_mean.zero_division_events += m.zero_division_events;
            ++counted;
        }
        if (counted > 0) {
            rep_mean.precision /= counted;
            rep_mean.recall /= counted;
            rep_mean.f_measure /= counted;
            rep_mean.auc /= counted;
        }
        report.repetitions.push_back(rep_mean);
    }
    report.finalize();
    return report;
}

// Leave-one-out CV; predictions are pooled before computing metrics once
// (per-fold metrics are degenerate with a single test row).
inline EvalReport evaluate_within_project(const Dataset& ds, const std::string& class_name,
                                          const ClassifierSpec& spec) {
    Matrix x;
    std::vector<int> y;
    extract_xy(ds, class_name, x, y);
    if (x.size() < 2) throw std::runtime_error("evaluate_within_project: need at least 2 rows");

    std::vector<int> fold(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) fold[i] = static_cast<int>(i);
    std::vector<int> truth, predicted;
    std::vector<double> scores;
    for (std::size_t i = 0; i < x.size(); ++i) {
        ClassifierSpec fold_spec = spec;
        fold_spec.seed = Rng::derive(spec.seed, static_cast<std::uint64_t>(i));
        const auto pred = detail::run_fold(fold_spec, x, y, fold, static_cast<int>(i));
        truth.insert(truth.end(), pred.truth.begin(), pred.truth.end());
        predicted.insert(predicted.end(), pred.predicted.begin(), pred.predicted.end());
        scores.insert(scores.end(), pred.scores.begin(), pred.scores.end());
    }
    EvalReport report;
    report.class_name = class_name;
    report.scenario = "within:" + ds.project;
    report.repetitions.push_back(compute_metrics(truth, predicted, scores));
    report.folds = report.repetitions;
    report.finalize();
    return report;
}

} // namespace csmell
