#pragma once

#include <cmath>
#include <vector>

#include "csmell/learn/tree.hpp" // Matrix

namespace csmell {

struct LogisticParams {
    double l2 = 0.0;          // ridge strength on weights (not bias)
    int max_iter = 10000;
    double tolerance = 1e-6;  // absolute change in mean log-loss
};

// L2-regularized logistic regression trained by monotone batch gradient
// descent: a step that increases the loss is rejected and the step size
// halved. Features are standardized internally; training is deterministic
// (zero initialization, no sampling).
class LogisticRegression {
public:
    void fit(const Matrix& x, const std::vector<int>& y, const LogisticParams& params) {
        const std::size_t n = x.size();
        const std::size_t d = n ? x[0].size() : 0;
        mean_.assign(d, 0.0);
        scale_.assign(d, 1.0);
        for (std::size_t j = 0; j < d; ++j) {
            double m = 0;
            for (std::size_t i = 0; i < n; ++i) m += x[i][j];
            m /= static_cast<double>(n);
            double var = 0;
            for (std::size_t i = 0; i < n; ++i) var += (x[i][j] - m) * (x[i][j] - m);
            var /= static_cast<double>(n);
            mean_[j] = m;
            scale_[j] = var > 0 ? std::sqrt(var) : 1.0;
        }
        Matrix z(n, std::vector<double>(d));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) z[i][j] = (x[i][j] - mean_[j]) / scale_[j];

        weights_.assign(d, 0.0);
        bias_ = 0.0;
        double lr = 1.0;
        double loss = loss_of(z, y, weights_, bias_, params.l2);
        std::vector<double> grad(d), trial(d);
        for (int iter = 0; iter < params.max_iter; ++iter) {
            std::fill(grad.begin(), grad.end(), 0.0);
            double grad_bias = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double p = sigmoid(dot(z[i], weights_) + bias_);
                const double err = p - y[i];
                for (std::size_t j = 0; j < d; ++j) grad[j] += err * z[i][j];
                grad_bias += err;
            }
            for (std::size_t j = 0; j < d; ++j)
                grad[j] = grad[j] / static_cast<double>(n) + params.l2 * weights_[j];
            grad_bias /= static_cast<double>(n);

            double trial_loss = 0;
            double trial_bias = 0;
            while (true) {
                for (std::size_t j = 0; j < d; ++j) trial[j] = weights_[j] - lr * grad[j];
                trial_bias = bias_ - lr * grad_bias;
                trial_loss = loss_of(z, y, trial, trial_bias, params.l2);
                if (trial_loss <= loss || lr < 1e-12) break;
                lr /= 2.0;
            }
            const double delta = loss - trial_loss;
            weights_ = trial;
            bias_ = trial_bias;
            loss = trial_loss;
            if (delta >= 0 && delta < params.tolerance) break;
        }
    }

    double score(const std::vector<double>& row) const {
        double s = bias_;
        for (std::size_t j = 0; j < row.size(); ++j)
            s += weights_[j] * (row[j] - mean_[j]) / scale_[j];
        return sigmoid(s);
    }

    int predict(const std::vector<double>& row) const { return score(row) > 0.5 ? 1 : 0; }

private:
    static double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

    static double dot(const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    }

    static double loss_of(const Matrix& z, const std::vector<int>& y,
                          const std::vector<double>& w, double b, double l2) {
        double loss = 0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double m = dot(z[i], w) + b;
            // log(1 + exp(-m)) computed stably
            const double t = y[i] ? -m : m;
            loss += t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
        }
        loss /= static_cast<double>(z.size());
        double reg = 0;
        for (const double v : w) reg += v * v;
        return loss + 0.5 * l2 * reg;
    }

    std::vector<double> weights_, mean_, scale_;
    double bias_ = 0.0;
};

} // namespace csmell
