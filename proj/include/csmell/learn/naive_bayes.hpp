#pragma once

#include <cmath>
#include <vector>

#include "csmell/learn/tree.hpp" // Matrix

namespace csmell {

// Gaussian naive Bayes with a variance floor of 1e-9.
class GaussianNaiveBayes {
public:
    void fit(const Matrix& x, const std::vector<int>& y) {
        const std::size_t n = x.size();
        const std::size_t d = n ? x[0].size() : 0;
        for (int c = 0; c < 2; ++c) {
            mean_[c].assign(d, 0.0);
            var_[c].assign(d, 0.0);
            count_[c] = 0;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const int c = y[i];
            ++count_[c];
            for (std::size_t j = 0; j < d; ++j) mean_[c][j] += x[i][j];
        }
        for (int c = 0; c < 2; ++c)
            if (count_[c] > 0)
                for (std::size_t j = 0; j < d; ++j) mean_[c][j] /= count_[c];
        for (std::size_t i = 0; i < n; ++i) {
            const int c = y[i];
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = x[i][j] - mean_[c][j];
                var_[c][j] += diff * diff;
            }
        }
        for (int c = 0; c < 2; ++c)
            for (std::size_t j = 0; j < d; ++j) {
                if (count_[c] > 0) var_[c][j] /= count_[c];
                if (var_[c][j] < 1e-9) var_[c][j] = 1e-9;
            }
        total_ = count_[0] + count_[1];
    }

    double score(const std::vector<double>& row) const {
        if (count_[0] == 0) return 1.0;
        if (count_[1] == 0) return 0.0;
        const double l0 = class_log_likelihood(0, row);
        const double l1 = class_log_likelihood(1, row);
        const double m = std::max(l0, l1);
        const double p1 = std::exp(l1 - m);
        const double p0 = std::exp(l0 - m);
        return p1 / (p0 + p1);
    }

    int predict(const std::vector<double>& row) const { return score(row) > 0.5 ? 1 : 0; }

private:
    double class_log_likelihood(int c, const std::vector<double>& row) const {
        double ll = std::log(count_[c] / total_);
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double diff = row[j] - mean_[c][j];
            ll += -0.5 * std::log(6.283185307179586 * var_[c][j]) -
                  diff * diff / (2.0 * var_[c][j]);
        }
        return ll;
    }

    std::vector<double> mean_[2], var_[2];
    double count_[2] = {0, 0};
    double total_ = 0;
};

} // namespace csmell
