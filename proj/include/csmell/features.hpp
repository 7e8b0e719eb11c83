#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "csmell/graphs.hpp"
#include "csmell/records.hpp"
#include "csmell/rng.hpp"
#include "csmell/smells.hpp"

namespace csmell {

// The 18 features, in table order. That order doubles as the tie-breaking
// order for correlation pruning (the later member of a correlated pair is
// dropped).
constexpr std::array<const char*, 18> kFeatureNames = {
    "VAL", "ARO", "DOM", "SAD", "ANG", "LOV", "JOY", "POS", "NEG",
    "POL", "IND", "IMP", "CON", "SUB", "MOD", "SEN", "COR", "SPO"};

constexpr int kFeatureCount = 18;

inline int feature_index(const std::string& name) {
    for (int i = 0; i < kFeatureCount; ++i)
        if (name == kFeatureNames[static_cast<std::size_t>(i)]) return i;
    return -1;
}

struct FeatureVector {
    std::array<double, 18> values{}; // indexed per kFeatureNames
    bool low_evidence = false;       // zero attributed sentences

    double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
};

// Smallest set of developers, by descending commit count (ties to the
// smallest id), whose cumulative commits reach 80% of the window's commits.
inline std::set<DevId> classify_core(const Corpus& corpus, const AnalysisWindow& window) {
    std::map<DevId, int> counts;
    int total = 0;
    for (const auto& c : corpus.commits) {
        if (c.developer == kUnresolved || !window.contains(c.timestamp)) continue;
        ++counts[c.developer];
        ++total;
    }
    std::set<DevId> core;
    if (total == 0) return core;
    std::vector<std::pair<DevId, int>> order(counts.begin(), counts.end());
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    int cum = 0;
    for (const auto& [dev, n] : order) {
        core.insert(dev);
        cum += n;
        if (5 * cum >= 4 * total) break; // cum/total >= 0.8 without float round-off
    }
    return core;
}

namespace detail {

// Working hours: Monday-Friday, 09:00 (inclusive) to 17:00 (exclusive), in
// the commit's recorded local zone.
inline bool in_working_hours(const CommitRecord& c) {
    const Instant local = c.timestamp + static_cast<Instant>(c.tz_offset_minutes) * 60;
    std::int64_t days = local / kSecondsPerDay;
    std::int64_t sec = local % kSecondsPerDay;
    if (sec < 0) {
        sec += kSecondsPerDay;
        days -= 1;
    }
    const int wd = weekday_mon0(days);
    if (wd > 4) return false;
    const std::int64_t hour = sec / 3600;
    return hour >= 9 && hour < 17;
}

} // namespace detail

// Developers all of whose window commits fall in working hours ("sponsored").
// Developers with no commits in the window never qualify.
inline std::set<DevId> classify_sponsored(const Corpus& corpus, const AnalysisWindow& window) {
    std::map<DevId, bool> all_working;
    for (const auto& c : corpus.commits) {
        if (c.developer == kUnresolved || !window.contains(c.timestamp)) continue;
        const bool ok = detail::in_working_hours(c);
        const auto it = all_working.find(c.developer);
        if (it == all_working.end())
            all_working[c.developer] = ok;
        else
            it->second = it->second && ok;
    }
    std::set<DevId> out;
    for (const auto& [dev, ok] : all_working)
        if (ok) out.insert(dev);
    return out;
}

// Sentiment and activeness aggregation for one developer over their whole
// observed history. POS averages strictly positive sentiment strengths, NEG
// strictly negative ones; zero strengths count toward neither.
inline FeatureVector aggregate_features(DevId developer, const Corpus& corpus,
                                        const std::vector<std::set<DevId>>& core_by_window,
                                        const std::vector<std::set<DevId>>& sponsored_by_window) {
    FeatureVector f;
    double n = 0;
    double val = 0, aro = 0, dom = 0, mod = 0;
    double sad = 0, ang = 0, lov = 0, joy = 0, pol = 0;
    double pos_sum = 0, neg_sum = 0;
    double pos_n = 0, neg_n = 0;
    std::array<double, 4> moods{};
    for (const auto& s : corpus.sentences) {
        if (s.developer != developer) continue;
        n += 1;
        val += s.valence;
        aro += s.arousal;
        dom += s.dominance;
        mod += s.modality;
        sad += s.sad;
        ang += s.anger;
        lov += s.love;
        joy += s.joy;
        pol += s.polite;
        if (s.sentiment_strength > 0) {
            pos_sum += s.sentiment_strength;
            pos_n += 1;
        } else if (s.sentiment_strength < 0) {
            neg_sum += s.sentiment_strength;
            neg_n += 1;
        }
        moods[static_cast<std::size_t>(s.mood)] += 1;
    }
    if (n > 0) {
        f[feature_index("VAL")] = val / n;
        f[feature_index("ARO")] = aro / n;
        f[feature_index("DOM")] = dom / n;
        f[feature_index("MOD")] = mod / n;
        f[feature_index("SAD")] = sad / n;
        f[feature_index("ANG")] = ang / n;
        f[feature_index("LOV")] = lov / n;
        f[feature_index("JOY")] = joy / n;
        f[feature_index("POL")] = pol / n;
        f[feature_index("IND")] = moods[0] / n;
        f[feature_index("IMP")] = moods[1] / n;
        f[feature_index("CON")] = moods[2] / n;
        f[feature_index("SUB")] = moods[3] / n;
    } else {
        f.low_evidence = true;
    }
    if (pos_n > 0) f[feature_index("POS")] = pos_sum / pos_n;
    if (neg_n > 0) f[feature_index("NEG")] = neg_sum / neg_n;
    f[feature_index("SEN")] = n;

    double cor = 0, spo = 0;
    for (const auto& w : core_by_window) cor += w.count(developer) ? 1 : 0;
    for (const auto& w : sponsored_by_window) spo += w.count(developer) ? 1 : 0;
    f[feature_index("COR")] = cor;
    f[feature_index("SPO")] = spo;
    return f;
}

struct DatasetRow {
    DevId developer = kUnresolved;
    std::string project;
    FeatureVector features;
    int silo = 0, lone_wolf = 0, bottleneck = 0, smelly_developer = 0, smelly_quitter = 0;

    int class_value(const std::string& name) const {
        if (name == "silo") return silo;
        if (name == "lone_wolf") return lone_wolf;
        if (name == "bottleneck") return bottleneck;
        if (name == "smelly_developer") return smelly_developer;
        if (name == "smelly_quitter") return smelly_quitter;
        throw std::runtime_error("unknown class: " + name);
    }
};

constexpr std::array<const char*, 5> kClassNames = {"silo", "lone_wolf", "bottleneck",
                                                    "smelly_developer", "smelly_quitter"};

struct Dataset {
    bool cross_project = true;
    std::string project; // meaningful when !cross_project
    std::vector<DatasetRow> rows;
    std::vector<std::string> active_features{kFeatureNames.begin(), kFeatureNames.end()};
    std::size_t dropped_rows = 0; // labeled developers without attributed sentences
    std::vector<std::string> warnings;

    std::vector<double> feature_column(const std::string& name) const {
        const int idx = feature_index(name);
        if (idx < 0) throw std::runtime_error("unknown feature: " + name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r.features[idx]);
        return out;
    }

    std::vector<int> class_column(const std::string& name) const {
        std::vector<int> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r.class_value(name));
        return out;
    }
};

// One row per (developer, project); a developer active in k projects yields
// k rows. Developers with labels but no attributed sentences are dropped and
// counted, mirroring the linkage loss the source datasets exhibit.
inline Dataset assemble_dataset(
    const std::vector<const Corpus*>& corpora,
    const std::map<std::string, std::vector<DeveloperLabels>>& labels_by_project,
    const std::map<std::string, std::vector<AnalysisWindow>>& windows_by_project) {
    Dataset ds;
    ds.cross_project = true;
    for (const Corpus* corpus : corpora) {
        const auto lab_it = labels_by_project.find(corpus->project);
        const auto win_it = windows_by_project.find(corpus->project);
        if (lab_it == labels_by_project.end() || win_it == windows_by_project.end())
            throw std::runtime_error("assemble_dataset: missing labels or windows for " +
                                     corpus->project);
        std::vector<std::set<DevId>> core, sponsored;
        for (const auto& w : win_it->second) {
            core.push_back(classify_core(*corpus, w));
            sponsored.push_back(classify_sponsored(*corpus, w));
        }
        for (const auto& lab : lab_it->second) {
            DatasetRow row;
            row.developer = lab.developer;
            row.project = corpus->project;
            row.features = aggregate_features(lab.developer, *corpus, core, sponsored);
            if (row.features.low_evidence) {
                ++ds.dropped_rows;
                continue;
            }
            row.silo = lab.silo;
            row.lone_wolf = lab.lone_wolf;
            row.bottleneck = lab.bottleneck;
            row.smelly_developer = lab.smelly_developer;
            row.smelly_quitter = lab.smelly_quitter;
            ds.rows.push_back(std::move(row));
        }
    }
    if (ds.dropped_rows > 0)
        ds.warnings.push_back(std::to_string(ds.dropped_rows) +
                              " labeled developers had no attributed sentences and were dropped");
    return ds;
}

inline Dataset within_project(const Dataset& ds, const std::string& project) {
    Dataset out;
    out.cross_project = false;
    out.project = project;
    out.active_features = ds.active_features;
    for (const auto& r : ds.rows)
        if (r.project == project) out.rows.push_back(r);
    return out;
}

// Seeded random undersampling of the majority class to a 1:1 ratio. Minority
// rows are untouched; majority rows are kept in their original order.
inline Dataset undersample(const Dataset& ds, const std::string& class_name,
                           std::uint64_t seed) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < ds.rows.size(); ++i)
        (ds.rows[i].class_value(class_name) ? pos : neg).push_back(i);
    if (pos.empty() || neg.empty())
        throw std::runtime_error("undersample: class " + class_name + " has only " +
                                 (pos.empty() ? std::string("negative") : std::string("positive")) +
                                 " examples");
    auto& majority = pos.size() > neg.size() ? pos : neg;
    const std::size_t target = std::min(pos.size(), neg.size());
    if (majority.size() > target) {
        Rng rng(seed);
        rng.shuffle(majority);
        majority.resize(target);
        std::sort(majority.begin(), majority.end());
    }
    std::vector<std::size_t> keep;
    keep.insert(keep.end(), pos.begin(), pos.end());
    keep.insert(keep.end(), neg.begin(), neg.end());
    std::sort(keep.begin(), keep.end());
    Dataset out;
    out.cross_project = ds.cross_project;
    out.project = ds.project;
    out.active_features = ds.active_features;
    for (const std::size_t i : keep) out.rows.push_back(ds.rows[i]);
    return out;
}

// Spearman rank correlation with midranks for ties. A constant column has
// correlation 0 with everything by convention.
inline std::vector<double> midranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw std::runtime_error("spearman: need two equal samples");
    const auto rx = midranks(x);
    const auto ry = midranks(y);
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0 || syy == 0) return 0.0; // constant feature
    return sxy / std::sqrt(sxx * syy);
}

struct PruneResult {
    Dataset dataset;
    std::vector<std::string> dropped;
    std::vector<std::string> warnings;
};

// Iteratively removes the later-in-table member of the most correlated pair
// until no active pair exceeds the threshold in absolute value. The
// paper_drop_list flag short-circuits to the fixed removal of VAL, DOM, CON.
inline PruneResult prune_correlated(const Dataset& ds, double threshold = 0.9,
                                    bool paper_drop_list = false) {
    PruneResult out;
    out.dataset = ds;
    if (paper_drop_list) {
        for (const char* name : {"VAL", "DOM", "CON"}) {
            auto& act = out.dataset.active_features;
            const auto it = std::find(act.begin(), act.end(), name);
            if (it != act.end()) {
                act.erase(it);
                out.dropped.push_back(name);
            }
        }
        return out;
    }
    if (ds.rows.size() < 2) throw std::runtime_error("prune_correlated: need at least 2 rows");

    std::map<std::string, std::vector<double>> cols;
    for (const auto& name : ds.active_features) {
        cols[name] = ds.feature_column(name);
        const auto& c = cols[name];
        if (std::all_of(c.begin(), c.end(), [&](double v) { return v == c.front(); }))
            out.warnings.push_back("feature " + name +
                                   " is constant; correlations with it treated as 0");
    }

    auto& active = out.dataset.active_features;
    while (true) {
        double best = 0.0;
        std::pair<std::size_t, std::size_t> pair{0, 0};
        bool found = false;
        for (std::size_t i = 0; i < active.size(); ++i) {
            for (std::size_t j = i + 1; j < active.size(); ++j) {
                const double rho = std::abs(spearman(cols[active[i]], cols[active[j]]));
                if (rho > threshold && rho > best + 1e-15) {
                    best = rho;
                    pair = {i, j};
                    found = true;
                }
            }
        }
        if (!found) break;
        // drop the later-in-table member of the worst pair
        const int ti = feature_index(active[pair.first]);
        const int tj = feature_index(active[pair.second]);
        const std::size_t victim = (tj > ti) ? pair.second : pair.first;
        out.dropped.push_back(active[victim]);
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(victim));
    }
    return out;
}

} // namespace csmell
