#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "csmell/learn/tree.hpp"
#include "csmell/rng.hpp"

namespace csmell {

struct ForestParams {
    int trees = 100;
    int max_depth = 0;
    int min_leaf = 1;
    int mtry = 0;         // 0 = ceil(sqrt(d))
    bool bootstrap = true;
};

// Bagged CART ensemble with a per-split random feature subset. With one tree,
// bootstrap off and mtry = d, the ensemble reproduces the plain decision tree.
class RandomForest {
public:
    void fit(const Matrix& x, const std::vector<int>& y, const ForestParams& params,
             std::uint64_t seed) {
        trees_.clear();
        const std::size_t d = x.empty() ? 0 : x[0].size();
        TreeParams tp;
        tp.max_depth = params.max_depth;
        tp.min_leaf = params.min_leaf;
        tp.mtry = params.mtry > 0
                      ? params.mtry
                      : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d))));
        for (int b = 0; b < params.trees; ++b) {
            Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(b)));
            Matrix xb;
            std::vector<int> yb;
            if (params.bootstrap) {
                xb.reserve(x.size());
                yb.reserve(y.size());
                for (std::size_t i = 0; i < x.size(); ++i) {
                    const std::size_t j = static_cast<std::size_t>(rng.next_below(x.size()));
                    xb.push_back(x[j]);
                    yb.push_back(y[j]);
                }
            }
            DecisionTree tree;
            tree.fit(params.bootstrap ? xb : x, params.bootstrap ? yb : y, tp, &rng);
            trees_.push_back(std::move(tree));
        }
    }

    double score(const std::vector<double>& row) const {
        double s = 0;
        for (const auto& t : trees_) s += t.score(row);
        return trees_.empty() ? 0.0 : s / static_cast<double>(trees_.size());
    }

    int predict(const std::vector<double>& row) const { return score(row) > 0.5 ? 1 : 0; }

private:
    std::vector<DecisionTree> trees_;
};

} // namespace csmell
