#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "csmell/records.hpp"

namespace csmell {

// Fixed, non-overlapping analysis windows anchored at the first commit.
struct AnalysisWindow {
    int index = 0;
    Instant start = 0;
    Instant end = 0; // exclusive
    bool partial = false;

    bool contains(Instant t) const { return t >= start && t < end; }
};

// Windows tile [first commit, last commit-or-message activity]. The final
// window is flagged partial unless activity reaches into its last day.
inline std::vector<AnalysisWindow> make_windows(const Corpus& corpus, int window_days = 90) {
    if (corpus.commits.empty()) throw std::runtime_error("make_windows: corpus has no commits");
    if (window_days <= 0) throw std::runtime_error("make_windows: window_days must be positive");
    const Instant first = corpus.commits.front().timestamp;
    Instant last = first;
    for (const auto& c : corpus.commits) last = std::max(last, c.timestamp);
    for (const auto& m : corpus.messages) last = std::max(last, m.timestamp);
    const std::int64_t len = static_cast<std::int64_t>(window_days) * kSecondsPerDay;
    const std::int64_t span = last - first;
    const int count = static_cast<int>(span / len) + 1;
    std::vector<AnalysisWindow> windows;
    windows.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k)
        windows.push_back({k, first + k * len, first + (k + 1) * len, false});
    const std::int64_t into_last = span - static_cast<std::int64_t>(count - 1) * len;
    if (into_last < len - kSecondsPerDay) windows.back().partial = true;
    return windows;
}

enum class GraphKind { collaboration, communication };

// Undirected weighted graph over developer ids; pairs stored (min, max).
struct SocioGraph {
    GraphKind kind = GraphKind::collaboration;
    std::set<DevId> vertices;
    std::map<std::pair<DevId, DevId>, int> edges;

    void add_edge(DevId u, DevId v, int w = 1) {
        if (u == v) return; // no self-loops
        if (u > v) std::swap(u, v);
        edges[{u, v}] += w;
    }

    bool adjacent(DevId u, DevId v) const {
        if (u > v) std::swap(u, v);
        return edges.count({u, v}) > 0;
    }

    std::map<DevId, std::vector<DevId>> adjacency() const {
        std::map<DevId, std::vector<DevId>> adj;
        for (const DevId v : vertices) adj[v];
        for (const auto& [e, w] : edges) {
            adj[e.first].push_back(e.second);
            adj[e.second].push_back(e.first);
        }
        return adj;
    }

    // Connected components labeled by their smallest member.
    std::map<DevId, DevId> components() const {
        std::map<DevId, DevId> label;
        const auto adj = adjacency();
        for (const DevId root : vertices) {
            if (label.count(root)) continue;
            std::vector<DevId> stack{root};
            label[root] = root;
            while (!stack.empty()) {
                const DevId u = stack.back();
                stack.pop_back();
                for (const DevId v : adj.at(u)) {
                    if (!label.count(v)) {
                        label[v] = root;
                        stack.push_back(v);
                    }
                }
            }
        }
        return label;
    }
};

// Vertex per developer with a resolved commit in the window; edge weight =
// number of distinct files both endpoints touched within the window.
inline SocioGraph build_collaboration_graph(const Corpus& corpus, const AnalysisWindow& window) {
    SocioGraph g;
    g.kind = GraphKind::collaboration;
    std::map<std::string, std::set<DevId>> file_devs;
    for (const auto& c : corpus.commits) {
        if (c.developer == kUnresolved || !window.contains(c.timestamp)) continue;
        g.vertices.insert(c.developer);
        for (const auto& f : c.files) file_devs[f].insert(c.developer);
    }
    for (const auto& [file, devs] : file_devs) {
        for (auto it = devs.begin(); it != devs.end(); ++it) {
            auto jt = it;
            for (++jt; jt != devs.end(); ++jt) g.add_edge(*it, *jt, 1);
        }
    }
    return g;
}

enum class CommunicationMode { reply, co_thread };

namespace detail {

// Thread key for a message: explicit thread_id, else the root of its reply
// chain as far as the corpus can see.
inline std::string thread_key(const MessageRecord& m,
                              const std::map<std::string, const MessageRecord*>& by_id) {
    if (m.thread_id) return "t:" + *m.thread_id;
    const MessageRecord* cur = &m;
    std::set<std::string> seen; // reply cycles exist in malformed archives
    while (cur->in_reply_to && by_id.count(*cur->in_reply_to) &&
           !seen.count(*cur->in_reply_to)) {
        seen.insert(*cur->in_reply_to);
        cur = by_id.at(*cur->in_reply_to);
    }
    return "m:" + (cur->in_reply_to ? *cur->in_reply_to : cur->message_id);
}

} // namespace detail

// Vertex per developer with a resolved message in the window. Reply mode
// draws an edge when one endpoint answered a message authored by the other;
// co-thread mode additionally connects all window participants of a thread.
inline SocioGraph build_communication_graph(const Corpus& corpus, const AnalysisWindow& window,
                                            CommunicationMode mode = CommunicationMode::reply) {
    SocioGraph g;
    g.kind = GraphKind::communication;
    std::map<std::string, const MessageRecord*> by_id;
    for (const auto& m : corpus.messages) by_id.emplace(m.message_id, &m);

    for (const auto& m : corpus.messages) {
        if (m.developer == kUnresolved || !window.contains(m.timestamp)) continue;
        g.vertices.insert(m.developer);
    }
    for (const auto& m : corpus.messages) {
        if (m.developer == kUnresolved || !window.contains(m.timestamp)) continue;
        if (!m.in_reply_to) continue;
        const auto it = by_id.find(*m.in_reply_to);
        if (it == by_id.end()) continue; // dangling reply
        const DevId target = it->second->developer;
        if (target == kUnresolved || target == m.developer) continue;
        if (!g.vertices.count(target)) continue; // counterpart silent this window
        g.add_edge(m.developer, target, 1);
    }
    if (mode == CommunicationMode::co_thread) {
        std::map<std::string, std::set<DevId>> participants;
        for (const auto& m : corpus.messages) {
            if (m.developer == kUnresolved || !window.contains(m.timestamp)) continue;
            participants[detail::thread_key(m, by_id)].insert(m.developer);
        }
        for (const auto& [key, devs] : participants) {
            for (auto it = devs.begin(); it != devs.end(); ++it) {
                auto jt = it;
                for (++jt; jt != devs.end(); ++jt)
                    if (!g.adjacent(*it, *jt)) g.add_edge(*it, *jt, 1);
            }
        }
    }
    return g;
}

struct CommunityPartition {
    std::map<DevId, int> assignment; // vertex -> community index, contiguous from 0
    int community_count = 0;

    std::vector<std::set<DevId>> groups() const {
        std::vector<std::set<DevId>> out(static_cast<std::size_t>(community_count));
        for (const auto& [v, c] : assignment) out[static_cast<std::size_t>(c)].insert(v);
        return out;
    }
};

// Unweighted Newman modularity of a partition.
inline double modularity(const SocioGraph& g, const std::map<DevId, int>& assignment) {
    const double m = static_cast<double>(g.edges.size());
    if (m == 0) return 0.0;
    std::map<int, double> internal, degree_sum;
    std::map<DevId, int> degree;
    for (const auto& [e, w] : g.edges) {
        ++degree[e.first];
        ++degree[e.second];
        if (assignment.at(e.first) == assignment.at(e.second))
            internal[assignment.at(e.first)] += 1.0;
    }
    for (const DevId v : g.vertices)
        degree_sum[assignment.at(v)] += static_cast<double>(degree.count(v) ? degree[v] : 0);
    double q = 0.0;
    for (const auto& [c, ds] : degree_sum) {
        const double ein = internal.count(c) ? internal[c] : 0.0;
        q += ein / m - (ds / (2.0 * m)) * (ds / (2.0 * m));
    }
    return q;
}

// Greedy agglomerative modularity maximization (CNM). Communities start as
// singletons and the pair with the largest positive modularity gain is merged;
// ties break on the lexicographically smallest (min id, min id) pair. Only
// edge-connected pairs are candidates, so components never merge.
inline CommunityPartition detect_communities(const SocioGraph& g) {
    if (g.kind != GraphKind::communication)
        throw std::runtime_error("detect_communities expects a communication graph");
    CommunityPartition out;
    if (g.vertices.empty()) return out;

    const double m = static_cast<double>(g.edges.size());
    std::map<DevId, int> comm; // vertex -> current community label (smallest member id)
    std::map<int, double> degree_sum;
    std::map<int, std::map<int, double>> between; // community -> community -> edge count
    for (const DevId v : g.vertices) {
        comm[v] = v;
        degree_sum[v] = 0.0;
    }
    for (const auto& [e, w] : g.edges) {
        degree_sum[e.first] += 1.0;
        degree_sum[e.second] += 1.0;
        between[e.first][e.second] += 1.0;
        between[e.second][e.first] += 1.0;
    }

    if (m > 0) {
        while (true) {
            double best_gain = 0.0;
            std::pair<int, int> best{-1, -1};
            for (const auto& [a, nbrs] : between) {
                for (const auto& [b, eab] : nbrs) {
                    if (b <= a) continue;
                    const double gain =
                        eab / m - degree_sum[a] * degree_sum[b] / (2.0 * m * m);
                    const std::pair<int, int> key{a, b};
                    if (gain > best_gain + 1e-12 ||
                        (std::abs(gain - best_gain) <= 1e-12 && best.first >= 0 && key < best)) {
                        best_gain = gain;
                        best = key;
                    }
                }
            }
            if (best.first < 0 || best_gain <= 1e-12) break;
            const auto [a, b] = best; // a < b: merge b into a
            degree_sum[a] += degree_sum[b];
            degree_sum.erase(b);
            for (const auto& [c, ebc] : between[b]) {
                if (c == a) continue;
                between[a][c] += ebc;
                between[c][a] += ebc;
                between[c].erase(b);
            }
            between[a].erase(b);
            between.erase(b);
            for (auto& [v, cv] : comm)
                if (cv == b) cv = a;
        }
    }

    // contiguous indices ordered by smallest member id
    std::map<int, int> relabel;
    for (const auto& [v, c] : comm)
        if (!relabel.count(c)) relabel[c] = static_cast<int>(relabel.size());
    for (const auto& [v, c] : comm) out.assignment[v] = relabel[c];
    out.community_count = static_cast<int>(relabel.size());
    return out;
}

} // namespace csmell
