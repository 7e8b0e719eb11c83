#pragma once

#include <stdexcept>
#include <vector>

#include "csmell/features.hpp" // midranks

namespace csmell {

struct Metrics {
    double precision = 0;
    double recall = 0;
    double f_measure = 0;
    double auc = 0;
    int zero_division_events = 0;
};

// Support-weighted precision/recall/F1 over the two classes, plus AUC-ROC
// computed as the tie-averaged rank statistic on the positive class (the
// normalized count of correctly ordered positive-negative score pairs).
// Undefined ratios are fixed to 0 and counted rather than aborting a batch;
// AUC with a one-sided truth vector counts as such an event and reports 0.5.
inline Metrics compute_metrics(const std::vector<int>& truth, const std::vector<int>& predictions,
                               const std::vector<double>& scores) {
    const std::size_t n = truth.size();
    if (n == 0) throw std::runtime_error("compute_metrics: empty input");
    if (predictions.size() != n || scores.size() != n)
        throw std::runtime_error("compute_metrics: length mismatch");

    Metrics m;
    double weighted_p = 0, weighted_r = 0, weighted_f = 0, support_total = 0;
    for (int cls = 0; cls < 2; ++cls) {
        double tp = 0, fp = 0, fn = 0, support = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool t = truth[i] == cls;
            const bool p = predictions[i] == cls;
            support += t;
            tp += t && p;
            fp += !t && p;
            fn += t && !p;
        }
        if (support == 0) continue;
        double prec;
        if (tp + fp == 0) {
            prec = 0;
            ++m.zero_division_events;
        } else {
            prec = tp / (tp + fp);
        }
        const double rec = tp / (tp + fn); // support > 0 here
        double f1;
        if (prec + rec == 0) {
            f1 = 0;
            ++m.zero_division_events;
        } else {
            f1 = 2 * prec * rec / (prec + rec);
        }
        weighted_p += support * prec;
        weighted_r += support * rec;
        weighted_f += support * f1;
        support_total += support;
    }
    m.precision = weighted_p / support_total;
    m.recall = weighted_r / support_total;
    m.f_measure = weighted_f / support_total;

    double n_pos = 0;
    for (const int t : truth) n_pos += t;
    const double n_neg = static_cast<double>(n) - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        m.auc = 0.5;
        ++m.zero_division_events;
        return m;
    }
    const auto ranks = midranks(scores);
    double rank_sum_pos = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (truth[i]) rank_sum_pos += ranks[i];
    m.auc = (rank_sum_pos - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg);
    return m;
}

} // namespace csmell
