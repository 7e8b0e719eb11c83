#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "csmell/learn/forest.hpp"
#include "csmell/learn/logistic.hpp"
#include "csmell/learn/naive_bayes.hpp"
#include "csmell/learn/tree.hpp"

namespace csmell {

enum class Algorithm { decision_tree, random_forest, logistic_regression, gaussian_naive_bayes };

inline const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::decision_tree: return "decision_tree";
        case Algorithm::random_forest: return "random_forest";
        case Algorithm::logistic_regression: return "logistic_regression";
        case Algorithm::gaussian_naive_bayes: return "gaussian_naive_bayes";
    }
    return "?";
}

inline Algorithm algorithm_from_name(const std::string& name) {
    if (name == "decision_tree") return Algorithm::decision_tree;
    if (name == "random_forest") return Algorithm::random_forest;
    if (name == "logistic_regression") return Algorithm::logistic_regression;
    if (name == "gaussian_naive_bayes") return Algorithm::gaussian_naive_bayes;
    throw std::runtime_error("unknown algorithm: " + name);
}

struct ClassifierSpec {
    Algorithm algorithm = Algorithm::random_forest;
    std::map<std::string, double> hyper_parameters;
    std::uint64_t seed = 0;

    double param(const std::string& name, double fallback) const {
        const auto it = hyper_parameters.find(name);
        return it == hyper_parameters.end() ? fallback : it->second;
    }
};

// Per-algorithm hyper-parameter grids, in declaration order (grid-search ties
// resolve to the earlier point).
inline std::vector<std::map<std::string, double>> default_grid(Algorithm a) {
    std::vector<std::map<std::string, double>> grid;
    switch (a) {
        case Algorithm::decision_tree:
            for (const double depth : {3.0, 5.0, 10.0, 0.0})
                for (const double leaf : {1.0, 5.0, 10.0})
                    grid.push_back({{"max_depth", depth}, {"min_leaf", leaf}});
            break;
        case Algorithm::random_forest:
            for (const double trees : {10.0, 50.0, 100.0})
                grid.push_back({{"trees", trees}});
            break;
        case Algorithm::logistic_regression:
            for (const double l2 : {0.0, 0.01, 0.1, 1.0})
                grid.push_back({{"l2", l2}});
            break;
        case Algorithm::gaussian_naive_bayes:
            grid.push_back({});
            break;
    }
    return grid;
}

// Trained model; predicts only on the feature columns it was trained with.
class Model {
public:
    Model() = default;

    static Model train(const ClassifierSpec& spec, const Matrix& x, const std::vector<int>& y,
                       std::vector<std::string> active_features = {}) {
        if (x.size() < 2) throw std::runtime_error("train_classifier: need at least 2 rows");
        bool has0 = false, has1 = false;
        for (const int v : y) (v ? has1 : has0) = true;
        if (!has0 || !has1)
            throw std::runtime_error("train_classifier: single-class input");

        Model m;
        m.spec_ = spec;
        m.active_features_ = std::move(active_features);
        switch (spec.algorithm) {
            case Algorithm::decision_tree: {
                TreeParams p;
                p.max_depth = static_cast<int>(spec.param("max_depth", 0));
                p.min_leaf = static_cast<int>(spec.param("min_leaf", 1));
                DecisionTree t;
                t.fit(x, y, p);
                m.impl_ = std::move(t);
                break;
            }
            case Algorithm::random_forest: {
                ForestParams p;
                p.trees = static_cast<int>(spec.param("trees", 100));
                p.max_depth = static_cast<int>(spec.param("max_depth", 0));
                p.min_leaf = static_cast<int>(spec.param("min_leaf", 1));
                p.mtry = static_cast<int>(spec.param("mtry", 0));
                p.bootstrap = spec.param("bootstrap", 1.0) != 0.0;
                RandomForest f;
                f.fit(x, y, p, spec.seed);
                m.impl_ = std::move(f);
                break;
            }
            case Algorithm::logistic_regression: {
                LogisticParams p;
                p.l2 = spec.param("l2", 0.0);
                LogisticRegression lr;
                lr.fit(x, y, p);
                m.impl_ = std::move(lr);
                break;
            }
            case Algorithm::gaussian_naive_bayes: {
                GaussianNaiveBayes nb;
                nb.fit(x, y);
                m.impl_ = std::move(nb);
                break;
            }
        }
        return m;
    }

    double score(const std::vector<double>& row) const {
        if (!active_features_.empty() && row.size() != active_features_.size())
            throw std::runtime_error("Model::score: feature count mismatch");
        return std::visit([&](const auto& impl) { return impl.score(row); }, impl_);
    }

    int predict(const std::vector<double>& row) const { return score(row) > 0.5 ? 1 : 0; }

    const ClassifierSpec& spec() const { return spec_; }
    const std::vector<std::string>& active_features() const { return active_features_; }

private:
    ClassifierSpec spec_;
    std::vector<std::string> active_features_;
    std::variant<DecisionTree, RandomForest, LogisticRegression, GaussianNaiveBayes> impl_;
};

} // namespace csmell
