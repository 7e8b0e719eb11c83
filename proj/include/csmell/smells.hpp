#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "csmell/graphs.hpp"
#include "csmell/records.hpp"

// Community smell detectors. Organizational Silo marks the endpoints of
// collaboration edges whose endpoints are disconnected in the communication
// graph; Lone Wolf relaxes disconnection to missing 1-degree adjacency (so
// Silo is always a subset); Bottleneck marks unique boundary spanners between
// communication sub-communities.

namespace csmell {

enum class SmellKind { organizational_silo, lone_wolf, bottleneck };

inline const char* smell_name(SmellKind k) {
    switch (k) {
        case SmellKind::organizational_silo: return "organizational_silo";
        case SmellKind::lone_wolf: return "lone_wolf";
        case SmellKind::bottleneck: return "bottleneck";
    }
    return "?";
}

// A developer present in collaboration but absent from communication counts
// as an isolated communication vertex.
inline std::set<DevId> detect_organizational_silo(const SocioGraph& collab,
                                                  const SocioGraph& comm) {
    const auto comp = comm.components();
    const auto component_of = [&](DevId v) -> DevId {
        const auto it = comp.find(v);
        return it == comp.end() ? v : it->second; // isolated vertices are their own component
    };
    std::set<DevId> out;
    for (const auto& [e, w] : collab.edges) {
        const bool isolated_u = !comp.count(e.first);
        const bool isolated_v = !comp.count(e.second);
        if (isolated_u || isolated_v || component_of(e.first) != component_of(e.second)) {
            out.insert(e.first);
            out.insert(e.second);
        }
    }
    return out;
}

inline std::set<DevId> detect_lone_wolf(const SocioGraph& collab, const SocioGraph& comm) {
    std::set<DevId> out;
    for (const auto& [e, w] : collab.edges) {
        if (!comm.adjacent(e.first, e.second)) {
            out.insert(e.first);
            out.insert(e.second);
        }
    }
    return out;
}

// v is a bottleneck iff, for some other community B, v is the only member of
// its community adjacent to any vertex of B.
inline std::set<DevId> detect_bottleneck(const SocioGraph& comm,
                                         const CommunityPartition& partition) {
    if (partition.assignment.size() != comm.vertices.size())
        throw std::runtime_error("detect_bottleneck: partition does not match graph");
    for (const DevId v : comm.vertices)
        if (!partition.assignment.count(v))
            throw std::runtime_error("detect_bottleneck: partition does not match graph");

    // spanners[A][B] = members of A adjacent to at least one vertex of B
    std::map<int, std::map<int, std::set<DevId>>> spanners;
    for (const auto& [e, w] : comm.edges) {
        const int ca = partition.assignment.at(e.first);
        const int cb = partition.assignment.at(e.second);
        if (ca == cb) continue;
        spanners[ca][cb].insert(e.first);
        spanners[cb][ca].insert(e.second);
    }
    std::set<DevId> out;
    for (const auto& [a, per_b] : spanners)
        for (const auto& [b, members] : per_b)
            if (members.size() == 1) out.insert(*members.begin());
    return out;
}

struct SmellAssignment {
    int window_index = 0;
    DevId developer = kUnresolved;
    std::set<SmellKind> smells;
};

// Per-window detection over the whole corpus.
struct WindowSmells {
    int window_index = 0;
    std::set<DevId> silo;
    std::set<DevId> lone_wolf;
    std::set<DevId> bottleneck;

    std::set<DevId> smelly() const {
        std::set<DevId> out = lone_wolf; // silo is a subset of lone wolf
        out.insert(silo.begin(), silo.end());
        out.insert(bottleneck.begin(), bottleneck.end());
        return out;
    }
};

inline std::vector<WindowSmells> detect_all_smells(const Corpus& corpus,
                                                   const std::vector<AnalysisWindow>& windows,
                                                   CommunicationMode mode =
                                                       CommunicationMode::reply) {
    std::vector<WindowSmells> out;
    out.reserve(windows.size());
    for (const auto& w : windows) {
        const SocioGraph collab = build_collaboration_graph(corpus, w);
        const SocioGraph comm = build_communication_graph(corpus, w, mode);
        WindowSmells ws;
        ws.window_index = w.index;
        ws.silo = detect_organizational_silo(collab, comm);
        ws.lone_wolf = detect_lone_wolf(collab, comm);
        ws.bottleneck = detect_bottleneck(comm, detect_communities(comm));
        out.push_back(std::move(ws));
    }
    return out;
}

struct DeveloperLabels {
    DevId developer = kUnresolved;
    std::string project;
    int silo = 0;
    int lone_wolf = 0;
    int bottleneck = 0;
    int smelly_developer = 0;
    int smelly_quitter = 0;
};

// Commit/message counts per developer per window; zero activity in the window
// after a smelly one makes a Smelly Quitter.
struct ActivityTable {
    std::map<DevId, std::vector<int>> commits;
    std::map<DevId, std::vector<int>> messages;
    std::size_t window_count = 0;

    bool active(DevId d, int window) const {
        const auto c = commits.find(d);
        if (c != commits.end() && c->second[static_cast<std::size_t>(window)] > 0) return true;
        const auto m = messages.find(d);
        return m != messages.end() && m->second[static_cast<std::size_t>(window)] > 0;
    }
};

inline ActivityTable build_activity(const Corpus& corpus,
                                    const std::vector<AnalysisWindow>& windows) {
    ActivityTable t;
    t.window_count = windows.size();
    const auto window_of = [&](Instant ts) -> int {
        for (const auto& w : windows)
            if (w.contains(ts)) return w.index;
        return -1;
    };
    for (const auto& c : corpus.commits) {
        if (c.developer == kUnresolved) continue;
        const int w = window_of(c.timestamp);
        if (w < 0) continue;
        auto& v = t.commits[c.developer];
        v.resize(windows.size(), 0);
        ++v[static_cast<std::size_t>(w)];
    }
    for (const auto& m : corpus.messages) {
        if (m.developer == kUnresolved) continue;
        const int w = window_of(m.timestamp);
        if (w < 0) continue;
        auto& v = t.messages[m.developer];
        v.resize(windows.size(), 0);
        ++v[static_cast<std::size_t>(w)];
    }
    for (auto& [d, v] : t.commits) v.resize(windows.size(), 0);
    for (auto& [d, v] : t.messages) v.resize(windows.size(), 0);
    return t;
}

// Collapses per-window assignments to per-developer flags. A developer is a
// Smelly Quitter when smelly in some window i-1 and entirely inactive in
// window i; a final-window smell has no successor and never qualifies.
inline std::vector<DeveloperLabels> derive_labels(const std::string& project,
                                                  const std::vector<WindowSmells>& smells,
                                                  const ActivityTable& activity) {
    std::set<DevId> population;
    for (const auto& [d, v] : activity.commits) population.insert(d);
    for (const auto& [d, v] : activity.messages) population.insert(d);
    for (const auto& ws : smells) {
        population.insert(ws.silo.begin(), ws.silo.end());
        population.insert(ws.lone_wolf.begin(), ws.lone_wolf.end());
        population.insert(ws.bottleneck.begin(), ws.bottleneck.end());
    }

    std::vector<DeveloperLabels> out;
    out.reserve(population.size());
    for (const DevId d : population) {
        DeveloperLabels lab;
        lab.developer = d;
        lab.project = project;
        std::vector<bool> smelly_in(smells.size(), false);
        for (std::size_t i = 0; i < smells.size(); ++i) {
            const auto& ws = smells[i];
            const bool s = ws.silo.count(d) > 0;
            const bool w = ws.lone_wolf.count(d) > 0;
            const bool b = ws.bottleneck.count(d) > 0;
            lab.silo |= s;
            lab.lone_wolf |= w;
            lab.bottleneck |= b;
            smelly_in[i] = s || w || b;
        }
        lab.smelly_developer = lab.silo || lab.lone_wolf || lab.bottleneck;
        for (std::size_t i = 1; i < smells.size(); ++i) {
            if (smelly_in[i - 1] && !activity.active(d, static_cast<int>(i))) {
                lab.smelly_quitter = 1;
                break;
            }
        }
        out.push_back(std::move(lab));
    }
    return out;
}

} // namespace csmell
