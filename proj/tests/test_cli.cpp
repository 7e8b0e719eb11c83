#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "csmell/ingest.hpp"
#include "csmell/pipeline.hpp"
#include "csmell/smells.hpp"
#include "csmell/synth.hpp"
#include "test_support.hpp"

using namespace csmell;
using testsupport::TempDir;
using testsupport::slurp;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CSMELL_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

SynthSpec small_spec() {
    SynthSpec spec;
    spec.teams = 4;
    spec.team_size = 5;
    spec.isolated_teams = 1;
    spec.lone_wolf_pairs = 1;
    spec.silo_pairs = 1;
    spec.bottleneck_pairs = 1;
    spec.satellite_team_size = 5;
    spec.windows = 3;
    spec.sentences_per_dev = 12;
    spec.seed = 99;
    return spec;
}

std::map<std::string, DevId> email_to_id(const Corpus& corpus) {
    std::map<std::string, DevId> out;
    for (const auto& ident : corpus.identities)
        for (const auto& email : ident.emails) out[email] = ident.canonical_id;
    return out;
}

std::set<DevId> ids_of(const std::set<std::string>& emails,
                       const std::map<std::string, DevId>& lookup) {
    std::set<DevId> out;
    for (const auto& e : emails) out.insert(lookup.at(e));
    return out;
}

} // namespace

TEST_CASE("synth: identical spec and seed produce byte-identical files") {
    TempDir a("synth_a"), b("synth_b");
    const SynthSpec spec = small_spec();
    generate_synthetic_corpus(spec, a.dir());
    generate_synthetic_corpus(spec, b.dir());
    for (const char* name : {"commits.jsonl", "mail.mbox", "sentences.csv", "truth.json"})
        CHECK(slurp(a.file(name)) == slurp(b.file(name)));
    const SynthSpec other = [] {
        SynthSpec s = small_spec();
        s.seed = 100;
        return s;
    }();
    TempDir c("synth_c");
    generate_synthetic_corpus(other, c.dir());
    CHECK(slurp(a.file("sentences.csv")) != slurp(c.file("sentences.csv")));
}

TEST_CASE("synth: planted lone wolves are detected exactly") {
    TempDir tmp("synth_wolves");
    SynthSpec spec;
    spec.teams = 4;
    spec.team_size = 5; // 20 developers
    spec.isolated_teams = 0;
    spec.lone_wolf_pairs = 2;
    spec.silo_pairs = 0;
    spec.bottleneck_pairs = 0;
    spec.windows = 2;
    spec.sentences_per_dev = 5;
    const SynthTruth truth = generate_synthetic_corpus(spec, tmp.dir());
    REQUIRE(truth.lone_wolf.size() == 4);

    const Corpus corpus = load_corpus(spec.project, tmp.file("commits.jsonl"),
                                      tmp.file("mail.mbox"), tmp.file("sentences.csv"));
    CHECK(corpus.identities.size() == 20);
    const auto lookup = email_to_id(corpus);
    const auto windows = make_windows(corpus, spec.window_days);
    const auto smells = detect_all_smells(corpus, windows);

    std::set<DevId> found_wolves, found_silos, found_bottlenecks;
    for (const auto& ws : smells) {
        found_wolves.insert(ws.lone_wolf.begin(), ws.lone_wolf.end());
        found_silos.insert(ws.silo.begin(), ws.silo.end());
        found_bottlenecks.insert(ws.bottleneck.begin(), ws.bottleneck.end());
    }
    CHECK(found_wolves == ids_of(truth.lone_wolf, lookup));
    CHECK(found_silos.empty());
    CHECK(found_bottlenecks.empty());
}

TEST_CASE("synth: all three planted smell kinds are found exactly") {
    TempDir tmp("synth_all");
    const SynthSpec spec = small_spec();
    const SynthTruth truth = generate_synthetic_corpus(spec, tmp.dir());
    const Corpus corpus = load_corpus(spec.project, tmp.file("commits.jsonl"),
                                      tmp.file("mail.mbox"), tmp.file("sentences.csv"));
    const auto lookup = email_to_id(corpus);
    const auto windows = make_windows(corpus, spec.window_days);
    const auto smells = detect_all_smells(corpus, windows);

    std::set<DevId> wolves, silos, bottlenecks;
    for (const auto& ws : smells) {
        wolves.insert(ws.lone_wolf.begin(), ws.lone_wolf.end());
        silos.insert(ws.silo.begin(), ws.silo.end());
        bottlenecks.insert(ws.bottleneck.begin(), ws.bottleneck.end());
    }
    CHECK(silos == ids_of(truth.silo, lookup));
    CHECK(wolves == ids_of(truth.lone_wolf, lookup));
    CHECK(bottlenecks == ids_of(truth.bottleneck, lookup));
}

TEST_CASE("synth: zero planted smells means all labels are zero") {
    TempDir tmp("synth_clean");
    SynthSpec spec;
    spec.teams = 3;
    spec.team_size = 5;
    spec.isolated_teams = 0;
    spec.lone_wolf_pairs = 0;
    spec.silo_pairs = 0;
    spec.bottleneck_pairs = 0;
    spec.windows = 2;
    spec.sentences_per_dev = 5;
    const SynthTruth truth = generate_synthetic_corpus(spec, tmp.dir());
    CHECK(truth.smelly().empty());

    const Corpus corpus = load_corpus(spec.project, tmp.file("commits.jsonl"),
                                      tmp.file("mail.mbox"), tmp.file("sentences.csv"));
    const auto windows = make_windows(corpus, spec.window_days);
    const auto smells = detect_all_smells(corpus, windows);
    const auto labels = derive_labels(spec.project, smells, build_activity(corpus, windows));
    for (const auto& lab : labels) {
        CHECK(lab.silo == 0);
        CHECK(lab.lone_wolf == 0);
        CHECK(lab.bottleneck == 0);
        CHECK(lab.smelly_developer == 0);
        CHECK(lab.smelly_quitter == 0);
    }
}

TEST_CASE("synth: quitters are smelly developers inactive in the final window") {
    TempDir tmp("synth_quit");
    SynthSpec spec = small_spec();
    spec.quitters = 2;
    const SynthTruth truth = generate_synthetic_corpus(spec, tmp.dir());
    REQUIRE(truth.quitter.size() == 2);

    const Corpus corpus = load_corpus(spec.project, tmp.file("commits.jsonl"),
                                      tmp.file("mail.mbox"), tmp.file("sentences.csv"));
    const auto lookup = email_to_id(corpus);
    const auto windows = make_windows(corpus, spec.window_days);
    const auto smells = detect_all_smells(corpus, windows);
    const auto labels = derive_labels(spec.project, smells, build_activity(corpus, windows));
    const auto quitter_ids = ids_of(truth.quitter, lookup);
    std::set<DevId> flagged;
    for (const auto& lab : labels)
        if (lab.smelly_quitter) flagged.insert(lab.developer);
    CHECK(flagged == quitter_ids);
}

TEST_CASE("synth: infeasible specs are rejected") {
    TempDir tmp("synth_bad");
    SynthSpec spec = small_spec();
    spec.quitters = 100; // more quitters than smelly developers
    CHECK_THROWS(generate_synthetic_corpus(spec, tmp.dir()));
    SynthSpec tiny;
    tiny.teams = 1;
    CHECK_THROWS(generate_synthetic_corpus(tiny, tmp.dir()));
}

TEST_CASE("cli: synth then full pipeline exits zero and writes the artifact set") {
    TempDir tmp("cli_all");
    REQUIRE(run_cli("synth --out " + tmp.dir() + " --teams 4 --team-size 5 --wolf-pairs 2 "
                    "--silo-pairs 1 --bottleneck-pairs 1 --windows 3 --sentences 10 --seed 5") ==
            0);
    const std::string out = tmp.dir() + "/out";
    REQUIRE(run_cli("all --config " + tmp.dir() + "/config.json --out " + out + " --seed 7") == 0);
    for (const char* name :
         {"corpus_synth.json", "windows_synth.json", "smells_synth.csv", "labels.csv",
          "dataset.csv", "featurize_summary.json", "model_selection.json", "eval_report.json",
          "eval_report.csv", "fold_metrics.csv", "gain_ranking_cross.csv",
          "gain_ranking_within.csv", "comparison.csv", "comparison.json", "manifest.json",
          "timings.json"}) {
        INFO(name);
        CHECK(std::filesystem::exists(out + "/" + name));
    }
}

TEST_CASE("cli: stages demand their upstream artifacts (exit 2)") {
    TempDir tmp("cli_dep");
    REQUIRE(run_cli("synth --out " + tmp.dir() + " --windows 2 --sentences 5 --seed 3") == 0);
    const std::string fresh = tmp.dir() + "/fresh";
    CHECK(run_cli("train --config " + tmp.dir() + "/config.json --out " + fresh) == 2);
    CHECK(run_cli("detect --config " + tmp.dir() + "/config.json --out " + fresh) == 2);
}

TEST_CASE("cli: configuration problems exit 1") {
    TempDir tmp("cli_cfg");
    CHECK(run_cli("all --config " + tmp.file("missing.json")) == 1);
    testsupport::write(tmp.file("bad.json"), "{\"projects\": []}");
    CHECK(run_cli("all --config " + tmp.file("bad.json")) == 1);
    testsupport::write(tmp.file("badpath.json"),
                       R"({"projects":[{"name":"x","commits":"nope.jsonl","mailbox":"nope.mbox","sentences":"nope.csv"}]})");
    CHECK(run_cli("all --config " + tmp.file("badpath.json")) == 1);
}

TEST_CASE("cli: malformed input data exits 3") {
    TempDir tmp("cli_data");
    testsupport::write(tmp.file("commits.jsonl"), "this is not json\n");
    testsupport::write(tmp.file("mail.mbox"), "");
    testsupport::write(tmp.file("sentences.csv"),
                       "project,developer,ts,valence,arousal,dominance,sad,anger,love,joy,"
                       "sentiment,polite,mood,modality\n");
    testsupport::write(
        tmp.file("config.json"),
        R"({"projects":[{"name":"x","commits":"commits.jsonl","mailbox":"mail.mbox","sentences":"sentences.csv"}]})");
    CHECK(run_cli("ingest --config " + tmp.file("config.json") + " --out " + tmp.dir() + "/out") ==
          3);
}

TEST_CASE("cli: reruns with the same seed produce identical manifests and reports") {
    TempDir tmp("cli_det");
    REQUIRE(run_cli("synth --out " + tmp.dir() +
                    " --teams 3 --team-size 5 --wolf-pairs 1 --silo-pairs 1 "
                    "--bottleneck-pairs 1 --windows 3 --sentences 8 --seed 11") == 0);
    const std::string out1 = tmp.dir() + "/out1";
    const std::string out2 = tmp.dir() + "/out2";
    REQUIRE(run_cli("all --config " + tmp.dir() + "/config.json --out " + out1 + " --seed 42") ==
            0);
    REQUIRE(run_cli("all --config " + tmp.dir() + "/config.json --out " + out2 + " --seed 42") ==
            0);
    CHECK(slurp(out1 + "/manifest.json") == slurp(out2 + "/manifest.json"));
    for (const char* name : {"dataset.csv", "eval_report.json", "gain_ranking_cross.csv",
                             "comparison.csv", "labels.csv"})
        CHECK(slurp(out1 + "/" + name) == slurp(out2 + "/" + name));

    const std::string out3 = tmp.dir() + "/out3";
    REQUIRE(run_cli("all --config " + tmp.dir() + "/config.json --out " + out3 + " --seed 43") ==
            0);
    CHECK(slurp(out1 + "/manifest.json") != slurp(out3 + "/manifest.json"));
}

TEST_CASE("cli: pipeline is re-entrant stage by stage") {
    TempDir tmp("cli_stages");
    REQUIRE(run_cli("synth --out " + tmp.dir() +
                    " --teams 3 --team-size 5 --wolf-pairs 1 --windows 2 --sentences 8 "
                    "--seed 21") == 0);
    const std::string cfg = tmp.dir() + "/config.json";
    const std::string out = tmp.dir() + "/out";
    for (const char* stage : {"ingest", "detect", "featurize", "train", "evaluate", "rank",
                              "compare"}) {
        INFO(stage);
        REQUIRE(run_cli(std::string(stage) + " --config " + cfg + " --out " + out +
                        " --seed 9") == 0);
    }
    CHECK(std::filesystem::exists(out + "/comparison.csv"));
}

TEST_CASE("cli: graph dumps use the documented edge-list format") {
    TempDir tmp("cli_dump");
    REQUIRE(run_cli("synth --out " + tmp.dir() +
                    " --teams 3 --team-size 5 --wolf-pairs 1 --windows 2 --sentences 6 "
                    "--seed 13") == 0);
    auto cfg = nlohmann::json::parse(slurp(tmp.dir() + "/config.json"));
    cfg["dump_graphs"] = true;
    testsupport::write(tmp.dir() + "/config.json", cfg.dump(2) + "\n");
    const std::string out = tmp.dir() + "/out";
    REQUIRE(run_cli("ingest --config " + tmp.dir() + "/config.json --out " + out) == 0);
    REQUIRE(run_cli("detect --config " + tmp.dir() + "/config.json --out " + out) == 0);
    const std::string dump = slurp(out + "/graphs_synth.txt");
    REQUIRE_FALSE(dump.empty());
    std::istringstream lines(dump);
    std::string kind;
    int window, u, v, weight;
    int checked = 0;
    while (lines >> kind >> window >> u >> v >> weight) {
        CHECK((kind == "collaboration" || kind == "communication"));
        CHECK(window >= 0);
        CHECK(u < v);
        CHECK(weight >= 1);
        ++checked;
    }
    CHECK(checked > 10);
}

TEST_CASE("cli: two projects pool into one cross-project dataset") {
    TempDir tmp("cli_multi");
    const std::string dir_a = tmp.dir() + "/alpha";
    const std::string dir_b = tmp.dir() + "/beta";
    REQUIRE(run_cli("synth --out " + dir_a +
                    " --project alpha --teams 3 --team-size 5 --wolf-pairs 1 --windows 2 "
                    "--sentences 8 --seed 61") == 0);
    REQUIRE(run_cli("synth --out " + dir_b +
                    " --project beta --teams 3 --team-size 5 --wolf-pairs 2 --silo-pairs 1 "
                    "--windows 3 --sentences 8 --seed 62") == 0);
    const nlohmann::json cfg = {
        {"projects",
         {{{"name", "alpha"},
           {"commits", dir_a + "/commits.jsonl"},
           {"mailbox", dir_a + "/mail.mbox"},
           {"sentences", dir_a + "/sentences.csv"}},
          {{"name", "beta"},
           {"commits", dir_b + "/commits.jsonl"},
           {"mailbox", dir_b + "/mail.mbox"},
           {"sentences", dir_b + "/sentences.csv"}}}},
        {"seed", 5}};
    testsupport::write(tmp.file("config.json"), cfg.dump(2) + "\n");
    const std::string out = tmp.dir() + "/out";
    REQUIRE(run_cli("all --config " + tmp.file("config.json") + " --out " + out) == 0);

    const Dataset ds = read_dataset_csv(out + "/dataset.csv");
    std::set<std::string> projects;
    std::set<std::pair<DevId, std::string>> keys;
    for (const auto& r : ds.rows) {
        projects.insert(r.project);
        const bool inserted = keys.insert({r.developer, r.project}).second;
        CHECK(inserted); // no duplicate developer-project pairs
    }
    CHECK(projects == std::set<std::string>{"alpha", "beta"});

    // within-project scenarios appear per project in the evaluation report
    const std::string eval = slurp(out + "/eval_report.csv");
    CHECK(eval.find("within:alpha") != std::string::npos);
    CHECK(eval.find("within:beta") != std::string::npos);
    CHECK(std::filesystem::exists(out + "/corpus_alpha.json"));
    CHECK(std::filesystem::exists(out + "/corpus_beta.json"));
    CHECK(std::filesystem::exists(out + "/smells_alpha.csv"));
    CHECK(std::filesystem::exists(out + "/smells_beta.csv"));
}
