#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "csmell/features.hpp" // midranks

namespace csmell {

// --------------------------------------------------------------------------
// Small special-function kit: regularized incomplete gamma and the chi-square
// quantile needed by the Scott-Knott likelihood-ratio cutoff.

namespace numeric {

inline double lower_gamma_regularized(double a, double x) {
    if (x < 0 || a <= 0) throw std::runtime_error("lower_gamma_regularized: bad arguments");
    if (x == 0) return 0.0;
    if (x < a + 1.0) {
        // series expansion
        double term = 1.0 / a;
        double sum = term;
        for (int k = 1; k < 1000; ++k) {
            term *= x / (a + k);
            sum += term;
            if (term < sum * 1e-15) break;
        }
        return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    // continued fraction for the upper tail (modified Lentz)
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int k = 1; k < 1000; ++k) {
        const double an = -static_cast<double>(k) * (static_cast<double>(k) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    const double q = std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    return 1.0 - q;
}

inline double chi_squared_cdf(double x, double dof) {
    if (x <= 0) return 0.0;
    return lower_gamma_regularized(dof / 2.0, x / 2.0);
}

inline double chi_squared_quantile(double p, double dof) {
    if (p <= 0) return 0.0;
    if (p >= 1) throw std::runtime_error("chi_squared_quantile: p must be < 1");
    double hi = 1.0;
    while (chi_squared_cdf(hi, dof) < p && hi < 1e9) hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = (lo + hi) / 2.0;
        if (chi_squared_cdf(mid, dof) < p)
            lo = mid;
        else
            hi = mid;
    }
    return (lo + hi) / 2.0;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / 1.4142135623730951); }

// Adjusted Fisher-Pearson sample skewness; 0 for fewer than 3 samples.
inline double sample_skewness(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    if (v.size() < 3) return 0.0;
    double mean = 0;
    for (const double x : v) mean += x;
    mean /= n;
    double m2 = 0, m3 = 0;
    for (const double x : v) {
        const double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    if (m2 <= 0) return 0.0;
    const double g1 = m3 / std::pow(m2, 1.5);
    return g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
}

} // namespace numeric

// --------------------------------------------------------------------------
// Information gain (mutual information, bits) with 10 equal-frequency bins;
// features with fewer than 10 distinct values get one bin per value.

inline double information_gain(const std::vector<double>& values, const std::vector<int>& labels,
                               int bins = 10) {
    const std::size_t n = values.size();
    if (n != labels.size() || n == 0)
        throw std::runtime_error("information_gain: need equal non-empty inputs");

    bool has0 = false, has1 = false;
    for (const int y : labels) (y ? has1 : has0) = true;
    if (!has0 || !has1) return 0.0; // constant labels carry no uncertainty

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> distinct = sorted;
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::vector<int> bin_of(n);
    if (distinct.size() < static_cast<std::size_t>(bins)) {
        for (std::size_t i = 0; i < n; ++i) {
            bin_of[i] = static_cast<int>(
                std::lower_bound(distinct.begin(), distinct.end(), values[i]) - distinct.begin());
        }
    } else {
        // internal edges at the empirical quantiles; duplicates collapse
        std::vector<double> edges;
        for (int b = 1; b < bins; ++b) {
            const std::size_t pos = static_cast<std::size_t>(
                static_cast<double>(b) * static_cast<double>(n) / static_cast<double>(bins));
            edges.push_back(sorted[std::min(pos, n - 1)]);
        }
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        // edges are upper-inclusive boundaries: bin k covers (edge[k-1], edge[k]]
        for (std::size_t i = 0; i < n; ++i) {
            bin_of[i] = static_cast<int>(
                std::lower_bound(edges.begin(), edges.end(), values[i]) - edges.begin());
        }
    }

    std::map<int, std::array<double, 2>> joint;
    double pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
        joint[bin_of[i]][static_cast<std::size_t>(labels[i])] += 1.0;
        pos += labels[i];
    }
    const double nn = static_cast<double>(n);
    const auto h2 = [](double p) {
        if (p <= 0.0 || p >= 1.0) return 0.0;
        return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
    };
    const double h_y = h2(pos / nn);
    double h_y_given_x = 0;
    for (const auto& [b, counts] : joint) {
        const double nb = counts[0] + counts[1];
        h_y_given_x += (nb / nn) * h2(counts[1] / nb);
    }
    return std::max(0.0, h_y - h_y_given_x);
}

// --------------------------------------------------------------------------
// Cliff's delta with the standard magnitude thresholds.

enum class EffectMagnitude { negligible, small, medium, large };

inline const char* magnitude_name(EffectMagnitude m) {
    switch (m) {
        case EffectMagnitude::negligible: return "negligible";
        case EffectMagnitude::small: return "small";
        case EffectMagnitude::medium: return "medium";
        case EffectMagnitude::large: return "large";
    }
    return "?";
}

inline EffectMagnitude delta_magnitude(double delta) {
    const double a = std::abs(delta);
    if (a < 0.147) return EffectMagnitude::negligible;
    if (a < 0.33) return EffectMagnitude::small;
    if (a < 0.474) return EffectMagnitude::medium;
    return EffectMagnitude::large;
}

struct CliffsDelta {
    double delta = 0;
    EffectMagnitude magnitude = EffectMagnitude::negligible;
};

inline CliffsDelta cliffs_delta(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.empty() || y.empty()) throw std::runtime_error("cliffs_delta: empty sample");
    // dominance counts via sorted y: O((n+m) log m)
    std::vector<double> ys = y;
    std::sort(ys.begin(), ys.end());
    double greater = 0, less = 0;
    for (const double v : x) {
        const auto lo = std::lower_bound(ys.begin(), ys.end(), v);
        const auto hi = std::upper_bound(ys.begin(), ys.end(), v);
        greater += static_cast<double>(lo - ys.begin()); // y values strictly below v
        less += static_cast<double>(ys.end() - hi);      // y values strictly above v
    }
    CliffsDelta out;
    out.delta = (greater - less) /
                (static_cast<double>(x.size()) * static_cast<double>(y.size()));
    out.magnitude = delta_magnitude(out.delta);
    return out;
}

// --------------------------------------------------------------------------
// Two-sided Wilcoxon rank-sum. Small inputs (n+m <= 16) are evaluated against
// the exact conditional permutation distribution over the observed midranks;
// larger ones use the normal approximation with tie and continuity correction.

inline double wilcoxon_ranksum(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size(), m = y.size();
    if (n == 0 || m == 0) throw std::runtime_error("wilcoxon_ranksum: empty sample");
    const std::size_t total = n + m;
    std::vector<double> combined;
    combined.reserve(total);
    combined.insert(combined.end(), x.begin(), x.end());
    combined.insert(combined.end(), y.begin(), y.end());
    const std::vector<double> ranks = midranks(combined);
    double w_obs = 0;
    for (std::size_t i = 0; i < n; ++i) w_obs += ranks[i];

    if (total <= 16) {
        // enumerate every assignment of n of the midranks to the first sample
        std::size_t le = 0, ge = 0, all = 0;
        const unsigned kMaskEnd = 1u << total;
        for (unsigned mask = 0; mask < kMaskEnd; ++mask) {
            if (static_cast<std::size_t>(__builtin_popcount(mask)) != n) continue;
            double w = 0;
            for (std::size_t i = 0; i < total; ++i)
                if (mask & (1u << i)) w += ranks[i];
            ++all;
            if (w <= w_obs + 1e-9) ++le;
            if (w >= w_obs - 1e-9) ++ge;
        }
        const double p = 2.0 * std::min(static_cast<double>(le), static_cast<double>(ge)) /
                         static_cast<double>(all);
        return std::min(1.0, p);
    }

    const double nn = static_cast<double>(n), mm = static_cast<double>(m),
                 tt = static_cast<double>(total);
    const double expected = nn * (tt + 1.0) / 2.0;
    // tie correction
    std::vector<double> sorted = combined;
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0;
    std::size_t i = 0;
    while (i < total) {
        std::size_t j = i;
        while (j + 1 < total && sorted[j + 1] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
    }
    const double variance = nn * mm / 12.0 * ((tt + 1.0) - tie_term / (tt * (tt - 1.0)));
    if (variance <= 0) return 1.0;
    double diff = w_obs - expected;
    if (diff > 0.5)
        diff -= 0.5;
    else if (diff < -0.5)
        diff += 0.5;
    else
        diff = 0.0;
    const double z = diff / std::sqrt(variance);
    return std::min(1.0, 2.0 * (1.0 - numeric::normal_cdf(std::abs(z))));
}

// --------------------------------------------------------------------------
// Scott-Knott effect size difference grouping.
//
// Groups are clustered on their means by the classic Scott-Knott recursive
// partition (likelihood-ratio statistic against a chi-square cutoff), after a
// conditional log shift that corrects skewed input, and adjacent clusters
// whose pooled samples differ by a negligible Cliff's delta are merged.
// Rank 1 is the best (highest) mean.

namespace detail {

struct SkGroup {
    std::string name;
    std::vector<double> samples;
    double mean = 0;
};

struct SkContext {
    double residual_df = 0;   // sum of (n_i - 1)
    double pooled_var = 0;    // within-group variance estimate
    double mean_group_size = 0;
};

inline void sk_partition(const std::vector<SkGroup>& groups, std::size_t lo, std::size_t hi,
                         double alpha, const SkContext& ctx,
                         std::vector<std::pair<std::size_t, std::size_t>>& clusters) {
    const std::size_t k = hi - lo;
    if (k < 2) {
        clusters.emplace_back(lo, hi);
        return;
    }
    double grand = 0;
    for (std::size_t i = lo; i < hi; ++i) grand += groups[i].mean;
    grand /= static_cast<double>(k);

    double best_b = -1;
    std::size_t best_cut = lo;
    for (std::size_t cut = lo + 1; cut < hi; ++cut) {
        double m1 = 0, m2 = 0;
        for (std::size_t i = lo; i < cut; ++i) m1 += groups[i].mean;
        for (std::size_t i = cut; i < hi; ++i) m2 += groups[i].mean;
        const double k1 = static_cast<double>(cut - lo), k2 = static_cast<double>(hi - cut);
        m1 /= k1;
        m2 /= k2;
        const double b = k1 * (m1 - grand) * (m1 - grand) + k2 * (m2 - grand) * (m2 - grand);
        if (b > best_b + 1e-15) {
            best_b = b;
            best_cut = cut;
        }
    }

    double ss_means = 0;
    for (std::size_t i = lo; i < hi; ++i)
        ss_means += (groups[i].mean - grand) * (groups[i].mean - grand);
    const double sigma2 =
        (ss_means + ctx.residual_df * ctx.pooled_var / ctx.mean_group_size) /
        (static_cast<double>(k) + ctx.residual_df);
    constexpr double kPi = 3.141592653589793;
    const double lambda = sigma2 > 0 ? kPi / (2.0 * (kPi - 2.0)) * best_b / sigma2 : 0.0;
    const double dof = static_cast<double>(k) / (kPi - 2.0);
    const double cutoff = numeric::chi_squared_quantile(1.0 - alpha, dof);

    if (lambda > cutoff) {
        sk_partition(groups, lo, best_cut, alpha, ctx, clusters);
        sk_partition(groups, best_cut, hi, alpha, ctx, clusters);
    } else {
        clusters.emplace_back(lo, hi);
    }
}

} // namespace detail

inline std::map<std::string, int> sk_esd(const std::map<std::string, std::vector<double>>& groups,
                                         double alpha = 0.05) {
    if (groups.empty()) return {};
    for (const auto& [name, samples] : groups)
        if (samples.size() < 2)
            throw std::runtime_error("sk_esd: group " + name + " has fewer than 2 samples");

    // conditional skew correction applied uniformly so cross-group order is
    // preserved
    std::vector<double> pooled;
    for (const auto& [name, samples] : groups)
        pooled.insert(pooled.end(), samples.begin(), samples.end());
    const double skew = numeric::sample_skewness(pooled);
    double shift = 0;
    bool transform = false;
    if (skew > 1.0) {
        transform = true;
        shift = *std::min_element(pooled.begin(), pooled.end());
    }

    std::vector<detail::SkGroup> gs;
    for (const auto& [name, samples] : groups) {
        detail::SkGroup g;
        g.name = name;
        for (const double v : samples)
            g.samples.push_back(transform ? std::log(v - shift + 1.0) : v);
        for (const double v : g.samples) g.mean += v;
        g.mean /= static_cast<double>(g.samples.size());
        gs.push_back(std::move(g));
    }
    std::sort(gs.begin(), gs.end(), [](const detail::SkGroup& a, const detail::SkGroup& b) {
        if (a.mean != b.mean) return a.mean > b.mean; // rank 1 = highest mean
        return a.name < b.name;
    });

    detail::SkContext ctx;
    double ss_within = 0, n_total = 0;
    for (const auto& g : gs) {
        const double n = static_cast<double>(g.samples.size());
        for (const double v : g.samples) ss_within += (v - g.mean) * (v - g.mean);
        ctx.residual_df += n - 1.0;
        n_total += n;
    }
    ctx.pooled_var = ctx.residual_df > 0 ? ss_within / ctx.residual_df : 0.0;
    ctx.mean_group_size = n_total / static_cast<double>(gs.size());

    std::vector<std::pair<std::size_t, std::size_t>> clusters;
    detail::sk_partition(gs, 0, gs.size(), alpha, ctx, clusters);
    std::sort(clusters.begin(), clusters.end());

    // merge adjacent clusters with negligible pooled effect size
    std::vector<std::pair<std::size_t, std::size_t>> merged;
    const auto pool = [&](std::pair<std::size_t, std::size_t> c) {
        std::vector<double> v;
        for (std::size_t i = c.first; i < c.second; ++i)
            v.insert(v.end(), gs[i].samples.begin(), gs[i].samples.end());
        return v;
    };
    for (const auto& c : clusters) {
        if (!merged.empty()) {
            const auto d = cliffs_delta(pool(merged.back()), pool(c));
            if (d.magnitude == EffectMagnitude::negligible) {
                merged.back().second = c.second;
                continue;
            }
        }
        merged.push_back(c);
    }

    std::map<std::string, int> ranks;
    for (std::size_t ci = 0; ci < merged.size(); ++ci)
        for (std::size_t i = merged[ci].first; i < merged[ci].second; ++i)
            ranks[gs[i].name] = static_cast<int>(ci) + 1;
    return ranks;
}

// --------------------------------------------------------------------------
// Smelly vs non-smelly population comparison (Table-V-shaped report). Zeros
// are removed from each side independently before testing.

struct FeatureComparison {
    std::string feature;
    double p_value = 1.0;
    double delta = 0.0;
    EffectMagnitude magnitude = EffectMagnitude::negligible;
    double mean_smelly = 0, mean_non_smelly = 0;
    double var_smelly = 0, var_non_smelly = 0;
    std::size_t n_smelly = 0, n_non_smelly = 0;
};

struct PopulationComparison {
    std::vector<FeatureComparison> features; // table order
    std::vector<std::string> warnings;
};

namespace detail {

inline double mean_of(const std::vector<double>& v) {
    double s = 0;
    for (const double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

inline double sample_variance(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0;
    for (const double x : v) s += (x - m) * (x - m);
    return s / (static_cast<double>(v.size()) - 1.0);
}

} // namespace detail

inline PopulationComparison compare_populations(const Dataset& ds,
                                                const std::string& class_name =
                                                    "smelly_developer") {
    PopulationComparison out;
    const std::vector<int> labels = ds.class_column(class_name);
    for (const auto& name : ds.active_features) {
        const std::vector<double> col = ds.feature_column(name);
        std::vector<double> smelly, non;
        for (std::size_t i = 0; i < col.size(); ++i) {
            if (col[i] == 0.0) continue; // zero-removal, each side independently
            (labels[i] ? smelly : non).push_back(col[i]);
        }
        if (smelly.empty() || non.empty()) {
            out.warnings.push_back("feature " + name +
                                   " skipped: a population is empty after zero-removal");
            continue;
        }
        FeatureComparison fc;
        fc.feature = name;
        fc.p_value = wilcoxon_ranksum(smelly, non);
        const auto cd = cliffs_delta(smelly, non);
        fc.delta = cd.delta;
        fc.magnitude = cd.magnitude;
        fc.mean_smelly = detail::mean_of(smelly);
        fc.mean_non_smelly = detail::mean_of(non);
        fc.var_smelly = detail::sample_variance(smelly);
        fc.var_non_smelly = detail::sample_variance(non);
        fc.n_smelly = smelly.size();
        fc.n_non_smelly = non.size();
        out.features.push_back(std::move(fc));
    }
    return out;
}

} // namespace csmell
