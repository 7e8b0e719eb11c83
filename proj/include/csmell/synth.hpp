#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "csmell/csv.hpp"
#include "csmell/records.hpp"
#include "csmell/rng.hpp"
#include "csmell/time.hpp"

// Synthetic corpus generator. The real study corpora cannot be redistributed,
// so acceptance runs on generated ones: a configurable roster of developer
// teams where selected developers are constructed to be smelly (collaboration
// without communication, unique boundary spanners) and smelly developers draw
// their sentence-level features from shifted distributions.
//
// Structure per window:
//   - every team co-commits a team file and communicates as a reply clique;
//   - mainland teams are chained by two vertex-disjoint communication
//     bridges, so no unique spanner arises from the chaining;
//   - a lone-wolf pair co-commits a file across two mainland teams (indirect
//     communication path exists, no direct edge);
//   - a silo pair co-commits across the mainland and an isolated island team
//     (no communication path at all);
//   - a bottleneck pair is the single bridge between two satellite teams that
//     form their own communication component.

namespace csmell {

struct SynthSpec {
    std::string project = "synth";
    int teams = 8;
    int team_size = 6;
    int isolated_teams = 2;
    int lone_wolf_pairs = 2;
    int silo_pairs = 2;
    int bottleneck_pairs = 1;
    int satellite_team_size = 6;
    int quitters = 0;  // smelly developers inactive in the final window
    int windows = 4;
    int window_days = 90;
    int sentences_per_dev = 40;

    // per-developer target proportions: smelly vs non-smelly means
    double imp_smelly = 0.09, imp_non_smelly = 0.26, imp_sd = 0.03;
    double ind_smelly = 0.65, ind_non_smelly = 0.77, ind_sd = 0.05;
    double pol_smelly = 0.54, pol_non_smelly = 0.67, pol_sd = 0.04;
    double joy_smelly = 0.08, joy_non_smelly = 0.02, joy_sd = 0.015;

    std::uint64_t seed = 1;
};

struct SynthTruth {
    std::set<std::string> silo;       // emails
    std::set<std::string> lone_wolf;  // includes silo members
    std::set<std::string> bottleneck;
    std::set<std::string> quitter;

    std::set<std::string> smelly() const {
        std::set<std::string> out = lone_wolf;
        out.insert(bottleneck.begin(), bottleneck.end());
        return out;
    }
};

namespace detail {

inline std::string format_rfc2822(Instant t) {
    static const char* kDays[] = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};
    static const char* kMonths[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    const std::int64_t days = t / kSecondsPerDay;
    const std::int64_t sec = t % kSecondsPerDay;
    const CivilDate cd = civil_from_days(days);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s, %u %s %lld %02lld:%02lld:%02lld +0000",
                  kDays[weekday_mon0(days)], cd.day, kMonths[cd.month - 1],
                  static_cast<long long>(cd.year), static_cast<long long>(sec / 3600),
                  static_cast<long long>((sec / 60) % 60), static_cast<long long>(sec % 60));
    return buf;
}

struct SynthDev {
    int index = 0;
    std::string email;
    std::string name;
    int team = -1;          // mainland team, or -1
    int island = -1;        // isolated team, or -1
    int satellite = -1;     // satellite team, or -1
    bool smelly = false;
    bool quits = false;
};

} // namespace detail

// Writes commits.jsonl, mail.mbox, sentences.csv, truth.json and a ready
// config.json into out_dir; returns the planted ground truth.
inline SynthTruth generate_synthetic_corpus(const SynthSpec& spec, const std::string& out_dir) {
    namespace fs = std::filesystem;
    if (spec.teams < 2 || spec.team_size < 4)
        throw std::runtime_error("synth: need at least 2 mainland teams of size 4");
    if (spec.windows < 1) throw std::runtime_error("synth: need at least 1 window");
    if (spec.silo_pairs > 0 && spec.isolated_teams < 1)
        throw std::runtime_error("synth: silo pairs need at least one isolated team");
    if (spec.quitters > 0 && spec.windows < 2)
        throw std::runtime_error("synth: quitters need at least 2 windows");
    if (spec.bottleneck_pairs > 0) {
        // Modularity has a resolution limit: two cliques joined by one edge
        // stay separate communities only while d_A * d_B > 2m. Undersized
        // satellite teams would silently merge and the planted bottleneck
        // would vanish, so reject such specs up front.
        const auto clique_edges = [](int s) { return s * (s - 1) / 2; };
        const int m_comm = spec.teams * clique_edges(spec.team_size) + 2 * (spec.teams - 1) +
                           spec.isolated_teams * clique_edges(spec.team_size) +
                           spec.bottleneck_pairs *
                               (2 * clique_edges(spec.satellite_team_size) + 1);
        const double sat_degree =
            static_cast<double>(spec.satellite_team_size) * (spec.satellite_team_size - 1) + 1;
        if (sat_degree * sat_degree <= 2.4 * m_comm)
            throw std::runtime_error(
                "synth: infeasible spec, satellite teams too small relative to the corpus; "
                "increase satellite_team_size");
    }

    fs::create_directories(out_dir);

    // roster
    std::vector<detail::SynthDev> devs;
    const auto add_dev = [&](int team, int island, int satellite) {
        detail::SynthDev d;
        d.index = static_cast<int>(devs.size());
        char buf[32];
        std::snprintf(buf, sizeof(buf), "dev%03d", d.index);
        d.email = std::string(buf) + "@synth.test";
        d.name = std::string("Dev ") + (buf + 3);
        d.team = team;
        d.island = island;
        d.satellite = satellite;
        devs.push_back(d);
        return d.index;
    };
    std::vector<std::vector<int>> team_members(static_cast<std::size_t>(spec.teams));
    for (int t = 0; t < spec.teams; ++t)
        for (int k = 0; k < spec.team_size; ++k)
            team_members[static_cast<std::size_t>(t)].push_back(add_dev(t, -1, -1));
    std::vector<std::vector<int>> island_members(static_cast<std::size_t>(spec.isolated_teams));
    for (int t = 0; t < spec.isolated_teams; ++t)
        for (int k = 0; k < spec.team_size; ++k)
            island_members[static_cast<std::size_t>(t)].push_back(add_dev(-1, t, -1));
    std::vector<std::vector<int>> sat_members(static_cast<std::size_t>(2 * spec.bottleneck_pairs));
    for (int t = 0; t < 2 * spec.bottleneck_pairs; ++t)
        for (int k = 0; k < spec.satellite_team_size; ++k)
            sat_members[static_cast<std::size_t>(t)].push_back(add_dev(-1, -1, t));

    // smell slots: members 0 and 1 of mainland teams carry the chain bridges
    std::vector<std::size_t> team_cursor(static_cast<std::size_t>(spec.teams), 2);
    std::vector<std::size_t> island_cursor(static_cast<std::size_t>(spec.isolated_teams), 0);
    const auto take = [](std::vector<int>& pool, std::size_t& cursor, const char* what) {
        if (cursor >= pool.size())
            throw std::runtime_error(std::string("synth: infeasible spec, no free ") + what);
        return pool[cursor++];
    };

    SynthTruth truth;
    std::vector<std::pair<int, int>> wolf_pairs, silo_pairs;
    for (int p = 0; p < spec.lone_wolf_pairs; ++p) {
        const int ta = (2 * p) % spec.teams;
        const int tb = (2 * p + 1) % spec.teams;
        const int a = take(team_members[static_cast<std::size_t>(ta)],
                           team_cursor[static_cast<std::size_t>(ta)], "lone wolf slot");
        const int b = take(team_members[static_cast<std::size_t>(tb)],
                           team_cursor[static_cast<std::size_t>(tb)], "lone wolf slot");
        wolf_pairs.emplace_back(a, b);
        truth.lone_wolf.insert(devs[static_cast<std::size_t>(a)].email);
        truth.lone_wolf.insert(devs[static_cast<std::size_t>(b)].email);
        devs[static_cast<std::size_t>(a)].smelly = devs[static_cast<std::size_t>(b)].smelly = true;
    }
    for (int p = 0; p < spec.silo_pairs; ++p) {
        const int ta = p % spec.teams;
        const int ti = p % spec.isolated_teams;
        const int a = take(team_members[static_cast<std::size_t>(ta)],
                           team_cursor[static_cast<std::size_t>(ta)], "silo slot");
        const int b = take(island_members[static_cast<std::size_t>(ti)],
                           island_cursor[static_cast<std::size_t>(ti)], "silo slot");
        silo_pairs.emplace_back(a, b);
        truth.silo.insert(devs[static_cast<std::size_t>(a)].email);
        truth.silo.insert(devs[static_cast<std::size_t>(b)].email);
        truth.lone_wolf.insert(devs[static_cast<std::size_t>(a)].email);
        truth.lone_wolf.insert(devs[static_cast<std::size_t>(b)].email);
        devs[static_cast<std::size_t>(a)].smelly = devs[static_cast<std::size_t>(b)].smelly = true;
    }
    for (int p = 0; p < spec.bottleneck_pairs; ++p) {
        const int a = sat_members[static_cast<std::size_t>(2 * p)][0];
        const int b = sat_members[static_cast<std::size_t>(2 * p + 1)][0];
        truth.bottleneck.insert(devs[static_cast<std::size_t>(a)].email);
        truth.bottleneck.insert(devs[static_cast<std::size_t>(b)].email);
        devs[static_cast<std::size_t>(a)].smelly = devs[static_cast<std::size_t>(b)].smelly = true;
    }
    {
        int remaining = spec.quitters;
        for (auto& d : devs) {
            if (remaining == 0) break;
            if (!d.smelly) continue;
            d.quits = true;
            truth.quitter.insert(d.email);
            --remaining;
        }
        if (remaining > 0)
            throw std::runtime_error("synth: infeasible spec, more quitters than smelly devs");
    }

    // 2020-01-06 was a Monday; windows anchor here.
    const Instant base = days_from_civil(2020, 1, 6) * kSecondsPerDay;
    const std::int64_t window_len = static_cast<std::int64_t>(spec.window_days) * kSecondsPerDay;

    Rng rng(spec.seed);
    nlohmann::json commits = nlohmann::json::array();
    std::string mbox;
    int commit_no = 0, msg_no = 0;

    const auto active_in = [&](const detail::SynthDev& d, int w) {
        return !(d.quits && w == spec.windows - 1);
    };
    // weekday working-hours instant inside window w; slot spreads devs out
    const std::int64_t weeks_per_window = std::max<std::int64_t>(1, spec.window_days / 7 - 1);
    const auto commit_time = [&](int w, int slot, bool late_night) {
        const std::int64_t week = (slot / 5) % weeks_per_window;
        const std::int64_t wd = slot % 5; // Monday..Friday
        const std::int64_t hour = late_night ? 2 : 10;
        return base + w * window_len + (week * 7 + wd) * kSecondsPerDay + hour * 3600;
    };
    const auto emit_commit = [&](int dev, Instant ts, const std::string& file) {
        const auto& d = devs[static_cast<std::size_t>(dev)];
        char id[16];
        std::snprintf(id, sizeof(id), "c%06d", commit_no++);
        commits.push_back({{"id", id},
                           {"name", d.name},
                           {"email", d.email},
                           {"ts", format_utc(ts)},
                           {"tz_offset_minutes", 0},
                           {"files", std::vector<std::string>{file}}});
    };
    const auto emit_message = [&](int dev, Instant ts, int reply_to_msg) {
        const auto& d = devs[static_cast<std::size_t>(dev)];
        char id[32];
        std::snprintf(id, sizeof(id), "m%06d@synth.test", msg_no);
        mbox += "From " + d.email + " " + detail::format_rfc2822(ts) + "\n";
        mbox += "From: " + d.name + " <" + d.email + ">\n";
        mbox += "Date: " + detail::format_rfc2822(ts) + "\n";
        mbox += "Message-ID: <" + std::string(id) + ">\n";
        if (reply_to_msg >= 0) {
            char rid[32];
            std::snprintf(rid, sizeof(rid), "m%06d@synth.test", reply_to_msg);
            mbox += "In-Reply-To: <" + std::string(rid) + ">\n";
        }
        mbox += "Subject: discussion\n\nnoted.\n\n";
        return msg_no++;
    };

    for (int w = 0; w < spec.windows; ++w) {
        // commits: team files + personal files
        const auto commit_clique = [&](const std::vector<int>& members, const std::string& file) {
            int slot = 0;
            for (const int dev : members) {
                const auto& d = devs[static_cast<std::size_t>(dev)];
                if (!active_in(d, w)) continue;
                const bool late = (dev % 7 == 3); // a few night owls on both sides
                emit_commit(dev, commit_time(w, slot++, late), file);
                emit_commit(dev, commit_time(w, slot++, false), "home/" + d.email + ".c");
            }
        };
        for (int t = 0; t < spec.teams; ++t)
            commit_clique(team_members[static_cast<std::size_t>(t)],
                          "team" + std::to_string(t) + "/main.c");
        for (int t = 0; t < spec.isolated_teams; ++t)
            commit_clique(island_members[static_cast<std::size_t>(t)],
                          "island" + std::to_string(t) + "/main.c");
        for (int t = 0; t < 2 * spec.bottleneck_pairs; ++t)
            commit_clique(sat_members[static_cast<std::size_t>(t)],
                          "sat" + std::to_string(t) + "/main.c");
        for (std::size_t p = 0; p < wolf_pairs.size(); ++p) {
            const auto [a, b] = wolf_pairs[p];
            const std::string file = "shared/wolf" + std::to_string(p) + ".c";
            if (active_in(devs[static_cast<std::size_t>(a)], w))
                emit_commit(a, commit_time(w, 3, false), file);
            if (active_in(devs[static_cast<std::size_t>(b)], w))
                emit_commit(b, commit_time(w, 8, false), file);
        }
        for (std::size_t p = 0; p < silo_pairs.size(); ++p) {
            const auto [a, b] = silo_pairs[p];
            const std::string file = "shared/silo" + std::to_string(p) + ".c";
            if (active_in(devs[static_cast<std::size_t>(a)], w))
                emit_commit(a, commit_time(w, 4, false), file);
            if (active_in(devs[static_cast<std::size_t>(b)], w))
                emit_commit(b, commit_time(w, 9, false), file);
        }

        // communication: reply cliques inside each team
        const Instant msg_base = base + w * window_len + 30 * kSecondsPerDay;
        std::map<int, int> anchor; // dev -> message id usable as reply target
        const auto message_clique = [&](const std::vector<int>& members) {
            std::vector<int> present;
            for (const int dev : members)
                if (active_in(devs[static_cast<std::size_t>(dev)], w)) present.push_back(dev);
            for (std::size_t i = 0; i < present.size(); ++i)
                anchor[present[i]] = emit_message(
                    present[i], msg_base + static_cast<Instant>(i) * 600, -1);
            for (std::size_t i = 0; i < present.size(); ++i)
                for (std::size_t j = i + 1; j < present.size(); ++j)
                    emit_message(present[j],
                                 msg_base + kSecondsPerDay +
                                     static_cast<Instant>(i * present.size() + j) * 60,
                                 anchor[present[i]]);
        };
        for (int t = 0; t < spec.teams; ++t)
            message_clique(team_members[static_cast<std::size_t>(t)]);
        for (int t = 0; t < spec.isolated_teams; ++t)
            message_clique(island_members[static_cast<std::size_t>(t)]);
        for (int t = 0; t < 2 * spec.bottleneck_pairs; ++t)
            message_clique(sat_members[static_cast<std::size_t>(t)]);

        // mainland chain: two vertex-disjoint bridges between adjacent teams
        for (int t = 0; t + 1 < spec.teams; ++t) {
            for (int lane = 0; lane < 2; ++lane) {
                const int u = team_members[static_cast<std::size_t>(t)][static_cast<std::size_t>(lane)];
                const int v = team_members[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(lane)];
                if (!active_in(devs[static_cast<std::size_t>(u)], w) ||
                    !active_in(devs[static_cast<std::size_t>(v)], w))
                    continue;
                emit_message(v, msg_base + 2 * kSecondsPerDay + (t * 2 + lane) * 120, anchor[u]);
            }
        }
        // satellite bridge: the single spanner edge
        for (int p = 0; p < spec.bottleneck_pairs; ++p) {
            const int u = sat_members[static_cast<std::size_t>(2 * p)][0];
            const int v = sat_members[static_cast<std::size_t>(2 * p + 1)][0];
            if (active_in(devs[static_cast<std::size_t>(u)], w) &&
                active_in(devs[static_cast<std::size_t>(v)], w))
                emit_message(v, msg_base + 2 * kSecondsPerDay + 7200 + p * 120, anchor[u]);
        }
    }

    // sentences with group-shifted IMP / POL / JOY
    std::string sentences =
        "project,developer,ts,valence,arousal,dominance,sad,anger,love,joy,sentiment,polite,"
        "mood,modality\n";
    const auto clamp01 = [](double v, double lo, double hi) {
        return v < lo ? lo : (v > hi ? hi : v);
    };
    char row[512];
    for (const auto& d : devs) {
        // independent mood weights per developer, normalized into a
        // categorical; keeps IMP and IND from being mirror images
        const double imp_w = clamp01(
            rng.normal(d.smelly ? spec.imp_smelly : spec.imp_non_smelly, spec.imp_sd), 0.01, 0.8);
        const double ind_w = clamp01(
            rng.normal(d.smelly ? spec.ind_smelly : spec.ind_non_smelly, spec.ind_sd), 0.2, 0.95);
        const double con_w = clamp01(rng.normal(0.10, 0.03), 0.01, 0.3);
        const double sub_w = clamp01(rng.normal(0.06, 0.02), 0.01, 0.2);
        const double mood_total = imp_w + ind_w + con_w + sub_w;
        const double imp_p = imp_w / mood_total;
        const double con_p = con_w / mood_total;
        const double sub_p = sub_w / mood_total;
        const double pol_p = clamp01(
            rng.normal(d.smelly ? spec.pol_smelly : spec.pol_non_smelly, spec.pol_sd), 0.05, 0.95);
        const double joy_p = clamp01(
            rng.normal(d.smelly ? spec.joy_smelly : spec.joy_non_smelly, spec.joy_sd), 0.0, 0.5);
        const int sentence_count =
            spec.sentences_per_dev / 2 +
            static_cast<int>(rng.next_below(static_cast<std::uint64_t>(
                std::max(1, spec.sentences_per_dev))));
        for (int s = 0; s < sentence_count; ++s) {
            const Instant ts = base + static_cast<Instant>(rng.next_below(
                static_cast<std::uint64_t>(spec.windows * window_len - 1)));
            const double u = rng.next_double();
            int mood;
            if (u < imp_p)
                mood = 1; // imperative
            else if (u < imp_p + con_p)
                mood = 2; // conditional
            else if (u < imp_p + con_p + sub_p)
                mood = 3; // subjunctive
            else
                mood = 0; // indicative
            const int polite = rng.bernoulli(pol_p) ? 1 : 0;
            const int joy = rng.bernoulli(joy_p) ? 1 : 0;
            const int sad = rng.bernoulli(0.10) ? 1 : 0;
            const int anger = rng.bernoulli(0.05) ? 1 : 0;
            const int love = rng.bernoulli(0.12) ? 1 : 0;
            const double roll = rng.next_double();
            double sentiment = 0.0;
            if (roll < 0.35)
                sentiment = 0.05 + 0.95 * rng.next_double();
            else if (roll < 0.70)
                sentiment = -(0.05 + 0.95 * rng.next_double());
            const double valence = rng.normal(0.90, 0.10);
            const double arousal = rng.normal(1.00, 0.10);
            const double dominance = rng.normal(0.95, 0.10);
            const double modality = clamp01(rng.normal(0.58, 0.10), -1.0, 1.0);
            std::snprintf(row, sizeof(row),
                          "%s,%s,%s,%.6f,%.6f,%.6f,%d,%d,%d,%d,%.6f,%d,%d,%.6f\n",
                          spec.project.c_str(), d.email.c_str(), format_utc(ts).c_str(),
                          valence, arousal, dominance, sad, anger, love, joy, sentiment, polite,
                          mood, modality);
            sentences += row;
        }
    }

    // files
    std::string commit_text;
    for (const auto& c : commits) commit_text += c.dump() + "\n";
    write_file((fs::path(out_dir) / "commits.jsonl").string(), commit_text);
    write_file((fs::path(out_dir) / "mail.mbox").string(), mbox);
    write_file((fs::path(out_dir) / "sentences.csv").string(), sentences);

    nlohmann::json truth_json = {
        {"silo", std::vector<std::string>(truth.silo.begin(), truth.silo.end())},
        {"lone_wolf", std::vector<std::string>(truth.lone_wolf.begin(), truth.lone_wolf.end())},
        {"bottleneck",
         std::vector<std::string>(truth.bottleneck.begin(), truth.bottleneck.end())},
        {"quitter", std::vector<std::string>(truth.quitter.begin(), truth.quitter.end())},
        {"developers", devs.size()}};
    write_file((fs::path(out_dir) / "truth.json").string(), truth_json.dump(2) + "\n");

    nlohmann::json config = {
        {"projects", nlohmann::json::array({{{"name", spec.project},
                                             {"commits", "commits.jsonl"},
                                             {"mailbox", "mail.mbox"},
                                             {"sentences", "sentences.csv"}}})},
        {"window_days", spec.window_days},
        {"seed", spec.seed}};
    write_file((fs::path(out_dir) / "config.json").string(), config.dump(2) + "\n");
    return truth;
}

} // namespace csmell
