#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "csmell/rng.hpp"

namespace csmell {

using Matrix = std::vector<std::vector<double>>; // row-major samples

struct TreeParams {
    int max_depth = 0;   // 0 = unlimited
    int min_leaf = 1;    // minimum samples per leaf
    int mtry = 0;        // features considered per split; 0 = all
};

// Binary CART with Gini impurity and exhaustive threshold search. Splits are
// value <= threshold to the left; thresholds are midpoints between adjacent
// distinct values. Ties between splits resolve to the first candidate in
// (feature, threshold) order, which keeps training deterministic.
class DecisionTree {
public:
    void fit(const Matrix& x, const std::vector<int>& y, const TreeParams& params,
             Rng* rng = nullptr) {
        params_ = params;
        nodes_.clear();
        std::vector<std::size_t> idx(x.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        build(x, y, idx, 0, rng);
    }

    double score(const std::vector<double>& row) const {
        std::size_t node = 0;
        while (!nodes_[node].leaf) {
            node = (row[static_cast<std::size_t>(nodes_[node].feature)] <= nodes_[node].threshold)
                       ? nodes_[node].left
                       : nodes_[node].right;
        }
        return nodes_[node].prob;
    }

    int predict(const std::vector<double>& row) const { return score(row) > 0.5 ? 1 : 0; }

    std::size_t node_count() const { return nodes_.size(); }
    int depth_of_root_split() const { return nodes_.empty() || nodes_[0].leaf ? 0 : 1; }
    int root_feature() const { return nodes_.empty() ? -1 : nodes_[0].feature; }
    double root_threshold() const { return nodes_.empty() ? 0.0 : nodes_[0].threshold; }

private:
    struct Node {
        bool leaf = true;
        double prob = 0.0; // positive fraction at the leaf
        int feature = -1;
        double threshold = 0.0;
        std::size_t left = 0, right = 0;
    };

    std::size_t build(const Matrix& x, const std::vector<int>& y,
                      const std::vector<std::size_t>& idx, int depth, Rng* rng) {
        const std::size_t me = nodes_.size();
        nodes_.push_back(Node{});
        double pos = 0;
        for (const std::size_t i : idx) pos += y[i];
        const double n = static_cast<double>(idx.size());
        nodes_[me].prob = pos / n;

        const bool pure = (pos == 0 || pos == n);
        const bool depth_capped = params_.max_depth > 0 && depth >= params_.max_depth;
        if (pure || depth_capped || idx.size() < 2 * static_cast<std::size_t>(params_.min_leaf) ||
            idx.size() < 2) {
            return me;
        }

        const std::size_t d = x[0].size();
        std::vector<int> features;
        if (params_.mtry > 0 && static_cast<std::size_t>(params_.mtry) < d && rng) {
            std::vector<int> all(d);
            for (std::size_t f = 0; f < d; ++f) all[f] = static_cast<int>(f);
            rng->shuffle(all);
            features.assign(all.begin(), all.begin() + params_.mtry);
            std::sort(features.begin(), features.end());
        } else {
            for (std::size_t f = 0; f < d; ++f) features.push_back(static_cast<int>(f));
        }

        const double parent_gini = gini(pos, n);
        double best_decrease = 1e-12;
        int best_feature = -1;
        double best_threshold = 0.0;

        std::vector<std::pair<double, int>> vals(idx.size());
        for (const int f : features) {
            for (std::size_t k = 0; k < idx.size(); ++k)
                vals[k] = {x[idx[k]][static_cast<std::size_t>(f)], y[idx[k]]};
            std::sort(vals.begin(), vals.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            double left_pos = 0;
            double left_n = 0;
            for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
                left_pos += vals[k].second;
                left_n += 1;
                if (vals[k].first == vals[k + 1].first) continue;
                const double right_n = n - left_n;
                if (left_n < params_.min_leaf || right_n < params_.min_leaf) continue;
                const double decrease = parent_gini -
                                        (left_n / n) * gini(left_pos, left_n) -
                                        (right_n / n) * gini(pos - left_pos, right_n);
                if (decrease > best_decrease) {
                    best_decrease = decrease;
                    best_feature = f;
                    best_threshold = (vals[k].first + vals[k + 1].first) / 2.0;
                }
            }
        }
        if (best_feature < 0) return me;

        std::vector<std::size_t> left_idx, right_idx;
        for (const std::size_t i : idx) {
            if (x[i][static_cast<std::size_t>(best_feature)] <= best_threshold)
                left_idx.push_back(i);
            else
                right_idx.push_back(i);
        }
        nodes_[me].leaf = false;
        nodes_[me].feature = best_feature;
        nodes_[me].threshold = best_threshold;
        const std::size_t l = build(x, y, left_idx, depth + 1, rng);
        nodes_[me].left = l;
        const std::size_t r = build(x, y, right_idx, depth + 1, rng);
        nodes_[me].right = r;
        return me;
    }

    static double gini(double pos, double n) {
        const double p = pos / n;
        return 1.0 - p * p - (1.0 - p) * (1.0 - p);
    }

    TreeParams params_;
    std::vector<Node> nodes_;
};

} // namespace csmell
