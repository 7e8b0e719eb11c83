#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "csmell/csv.hpp"
#include "csmell/features.hpp"
#include "csmell/graphs.hpp"
#include "csmell/ingest.hpp"
#include "csmell/learn/evaluate.hpp"
#include "csmell/smells.hpp"
#include "csmell/stats.hpp"

// Pipeline orchestration: a declarative run configuration, one function per
// stage, CSV/JSON artifacts between stages, and a deterministic manifest.
// Exit-code contract: 0 success, 1 config error, 2 missing upstream artifact,
// 3 data error.

namespace csmell {

inline const char* kToolVersion = "csmell 0.1.0";

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MissingArtifact : public std::runtime_error {
public:
    MissingArtifact(const std::string& stage, const std::string& path)
        : std::runtime_error("stage " + stage + " requires missing artifact: " + path) {}
};

struct ProjectInput {
    std::string name;
    std::string commits;
    std::string mailbox;
    std::string sentences;
};

struct RunConfig {
    std::vector<ProjectInput> projects;
    int window_days = 90;
    CommunicationMode communication_mode = CommunicationMode::reply;
    double correlation_threshold = 0.9;
    bool paper_drop_list = false;
    std::vector<Algorithm> classifiers = {Algorithm::decision_tree, Algorithm::random_forest,
                                          Algorithm::logistic_regression,
                                          Algorithm::gaussian_naive_bayes};
    std::vector<std::string> classes = {kClassNames.begin(), kClassNames.end()};
    int cv_repetitions = 10;
    int cv_folds = 10;
    int gain_repetitions = 10;
    int gain_bins = 10;
    bool dump_graphs = false;
    std::uint64_t seed = 42;
    std::string out_dir = "out";
};

// Loads and validates the JSON run configuration. Relative input paths are
// resolved against the config file's directory.
inline RunConfig load_config(const std::string& path) {
    namespace fs = std::filesystem;
    if (!fs::exists(path)) throw ConfigError("config file does not exist: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg;
    std::vector<std::string> bad_fields;
    const fs::path base = fs::path(path).parent_path();
    const auto resolve = [&](const std::string& p) {
        return fs::path(p).is_absolute() ? p : (base / p).string();
    };

    if (!j.contains("projects") || !j["projects"].is_array() || j["projects"].empty()) {
        bad_fields.push_back("projects (non-empty array required)");
    } else {
        for (const auto& pj : j["projects"]) {
            ProjectInput in;
            try {
                in.name = pj.at("name").get<std::string>();
                in.commits = resolve(pj.at("commits").get<std::string>());
                in.mailbox = resolve(pj.at("mailbox").get<std::string>());
                in.sentences = resolve(pj.at("sentences").get<std::string>());
            } catch (const std::exception&) {
                bad_fields.push_back("projects (each entry needs name/commits/mailbox/sentences)");
                continue;
            }
            for (const std::string* p : {&in.commits, &in.mailbox, &in.sentences})
                if (!fs::exists(*p)) bad_fields.push_back("projects." + in.name + ": " + *p +
                                                          " does not exist");
            cfg.projects.push_back(std::move(in));
        }
    }
    if (j.contains("window_days")) {
        cfg.window_days = j["window_days"].get<int>();
        if (cfg.window_days <= 0) bad_fields.push_back("window_days (must be positive)");
    }
    if (j.contains("communication_mode")) {
        const std::string mode = j["communication_mode"].get<std::string>();
        if (mode == "reply")
            cfg.communication_mode = CommunicationMode::reply;
        else if (mode == "co_thread")
            cfg.communication_mode = CommunicationMode::co_thread;
        else
            bad_fields.push_back("communication_mode (reply | co_thread)");
    }
    if (j.contains("correlation_threshold")) {
        cfg.correlation_threshold = j["correlation_threshold"].get<double>();
        if (cfg.correlation_threshold <= 0 || cfg.correlation_threshold > 1)
            bad_fields.push_back("correlation_threshold (must be in (0,1])");
    }
    if (j.contains("paper_drop_list")) cfg.paper_drop_list = j["paper_drop_list"].get<bool>();
    if (j.contains("classifiers")) {
        cfg.classifiers.clear();
        for (const auto& c : j["classifiers"]) {
            try {
                cfg.classifiers.push_back(algorithm_from_name(c.get<std::string>()));
            } catch (const std::exception&) {
                bad_fields.push_back("classifiers (unknown: " + c.dump() + ")");
            }
        }
        if (cfg.classifiers.empty()) bad_fields.push_back("classifiers (must not be empty)");
    }
    if (j.contains("classes")) {
        cfg.classes.clear();
        for (const auto& c : j["classes"]) {
            const std::string name = c.get<std::string>();
            if (std::find(kClassNames.begin(), kClassNames.end(), name) == kClassNames.end())
                bad_fields.push_back("classes (unknown: " + name + ")");
            else
                cfg.classes.push_back(name);
        }
    }
    if (j.contains("cv_repetitions")) cfg.cv_repetitions = j["cv_repetitions"].get<int>();
    if (j.contains("cv_folds")) cfg.cv_folds = j["cv_folds"].get<int>();
    if (j.contains("gain_repetitions")) cfg.gain_repetitions = j["gain_repetitions"].get<int>();
    if (j.contains("gain_bins")) cfg.gain_bins = j["gain_bins"].get<int>();
    if (cfg.cv_repetitions <= 0) bad_fields.push_back("cv_repetitions (must be positive)");
    if (cfg.cv_folds < 2) bad_fields.push_back("cv_folds (must be >= 2)");
    if (cfg.gain_repetitions <= 0) bad_fields.push_back("gain_repetitions (must be positive)");
    if (cfg.gain_bins < 2) bad_fields.push_back("gain_bins (must be >= 2)");
    if (j.contains("dump_graphs")) cfg.dump_graphs = j["dump_graphs"].get<bool>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();

    if (!bad_fields.empty()) {
        std::string msg = "invalid configuration fields:";
        for (const auto& f : bad_fields) msg += "\n  - " + f;
        throw ConfigError(msg);
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// Artifact paths and helpers.

struct Artifacts {
    std::filesystem::path out;

    std::string corpus(const std::string& project) const {
        return (out / ("corpus_" + project + ".json")).string();
    }
    std::string windows(const std::string& project) const {
        return (out / ("windows_" + project + ".json")).string();
    }
    std::string smells(const std::string& project) const {
        return (out / ("smells_" + project + ".csv")).string();
    }
    std::string graph_dump(const std::string& project) const {
        return (out / ("graphs_" + project + ".txt")).string();
    }
    std::string labels() const { return (out / "labels.csv").string(); }
    std::string dataset() const { return (out / "dataset.csv").string(); }
    std::string featurize_summary() const { return (out / "featurize_summary.json").string(); }
    std::string model_selection() const { return (out / "model_selection.json").string(); }
    std::string eval_json() const { return (out / "eval_report.json").string(); }
    std::string eval_csv() const { return (out / "eval_report.csv").string(); }
    std::string fold_metrics() const { return (out / "fold_metrics.csv").string(); }
    std::string gain_cross() const { return (out / "gain_ranking_cross.csv").string(); }
    std::string gain_within() const { return (out / "gain_ranking_within.csv").string(); }
    std::string rank_summary() const { return (out / "rank_summary.json").string(); }
    std::string comparison_csv() const { return (out / "comparison.csv").string(); }
    std::string comparison_json() const { return (out / "comparison.json").string(); }
    std::string manifest() const { return (out / "manifest.json").string(); }
    std::string timings() const { return (out / "timings.json").string(); }
};

inline void require_artifact(const std::string& stage, const std::string& path) {
    if (!std::filesystem::exists(path)) throw MissingArtifact(stage, path);
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string fnv1a64_hex(const std::string& bytes) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

// ---------------------------------------------------------------------------
// Dataset CSV (the interchange format): developer, project, 18 features,
// 5 classes.

inline void write_dataset_csv(const Dataset& ds, const std::string& path) {
    CsvWriter w(path);
    std::vector<std::string> header = {"developer", "project"};
    for (const char* f : kFeatureNames) header.push_back(f);
    for (const char* c : kClassNames) header.push_back(c);
    w.row(header);
    for (const auto& r : ds.rows) {
        std::vector<std::string> row = {std::to_string(r.developer), r.project};
        for (int f = 0; f < kFeatureCount; ++f) row.push_back(fmt_double(r.features[f], 12));
        for (const char* c : kClassNames) row.push_back(std::to_string(r.class_value(c)));
        w.row(row);
    }
}

inline Dataset read_dataset_csv(const std::string& path) {
    Dataset ds;
    const std::string text = read_file(path);
    std::size_t pos = 0;
    std::vector<std::string> header;
    if (!csv_next_record(text, pos, header))
        throw std::runtime_error(path + ": empty dataset");
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    std::vector<std::string> row;
    while (csv_next_record(text, pos, row)) {
        if (row.size() == 1 && row[0].empty()) continue;
        DatasetRow r;
        r.developer = std::stoi(row[col.at("developer")]);
        r.project = row[col.at("project")];
        for (int f = 0; f < kFeatureCount; ++f)
            r.features[f] = std::stod(row[col.at(kFeatureNames[static_cast<std::size_t>(f)])]);
        r.silo = std::stoi(row[col.at("silo")]);
        r.lone_wolf = std::stoi(row[col.at("lone_wolf")]);
        r.bottleneck = std::stoi(row[col.at("bottleneck")]);
        r.smelly_developer = std::stoi(row[col.at("smelly_developer")]);
        r.smelly_quitter = std::stoi(row[col.at("smelly_quitter")]);
        ds.rows.push_back(std::move(r));
    }
    return ds;
}

// ---------------------------------------------------------------------------
// Stages. Each returns the list of artifacts it wrote (for the manifest).

inline std::vector<std::string> stage_ingest(const RunConfig& cfg, const Artifacts& art) {
    std::filesystem::create_directories(art.out);
    std::vector<std::string> outputs;
    for (const auto& p : cfg.projects) {
        const Corpus corpus = load_corpus(p.name, p.commits, p.mailbox, p.sentences);
        write_file(art.corpus(p.name), corpus_to_json(corpus).dump(1) + "\n");
        outputs.push_back(art.corpus(p.name));
    }
    return outputs;
}

inline std::vector<std::string> stage_detect(const RunConfig& cfg, const Artifacts& art) {
    std::vector<std::string> outputs;
    CsvWriter labels_csv(art.labels());
    labels_csv.row({"developer", "project", "silo", "lone_wolf", "bottleneck",
                    "smelly_developer", "smelly_quitter"});
    for (const auto& p : cfg.projects) {
        require_artifact("detect", art.corpus(p.name));
        const Corpus corpus =
            corpus_from_json(nlohmann::json::parse(read_file(art.corpus(p.name))));
        const std::vector<AnalysisWindow> windows = make_windows(corpus, cfg.window_days);

        CsvWriter smells_csv(art.smells(p.name));
        smells_csv.row({"window", "developer", "silo", "lone_wolf", "bottleneck"});
        nlohmann::json windows_json = nlohmann::json::array();
        std::string dump_text;
        std::vector<WindowSmells> smells;
        smells.reserve(windows.size());
        for (const auto& w : windows) {
            const SocioGraph collab = build_collaboration_graph(corpus, w);
            const SocioGraph comm = build_communication_graph(corpus, w, cfg.communication_mode);
            const CommunityPartition part = detect_communities(comm);
            WindowSmells ws;
            ws.window_index = w.index;
            ws.silo = detect_organizational_silo(collab, comm);
            ws.lone_wolf = detect_lone_wolf(collab, comm);
            ws.bottleneck = detect_bottleneck(comm, part);

            std::set<DevId> present = collab.vertices;
            present.insert(comm.vertices.begin(), comm.vertices.end());
            for (const DevId dev : present) {
                smells_csv.row({std::to_string(w.index), std::to_string(dev),
                                std::to_string(ws.silo.count(dev)),
                                std::to_string(ws.lone_wolf.count(dev)),
                                std::to_string(ws.bottleneck.count(dev))});
            }
            windows_json.push_back({{"index", w.index},
                                    {"start", format_utc(w.start)},
                                    {"end", format_utc(w.end)},
                                    {"partial", w.partial},
                                    {"collaboration",
                                     {{"vertices", collab.vertices.size()},
                                      {"edges", collab.edges.size()}}},
                                    {"communication",
                                     {{"vertices", comm.vertices.size()},
                                      {"edges", comm.edges.size()},
                                      {"communities", part.community_count}}}});
            if (cfg.dump_graphs) {
                for (const auto& [e, weight] : collab.edges)
                    dump_text += "collaboration " + std::to_string(w.index) + " " +
                                 std::to_string(e.first) + " " + std::to_string(e.second) + " " +
                                 std::to_string(weight) + "\n";
                for (const auto& [e, weight] : comm.edges)
                    dump_text += "communication " + std::to_string(w.index) + " " +
                                 std::to_string(e.first) + " " + std::to_string(e.second) + " " +
                                 std::to_string(weight) + "\n";
            }
            smells.push_back(std::move(ws));
        }
        write_file(art.windows(p.name), windows_json.dump(1) + "\n");
        outputs.push_back(art.windows(p.name));
        outputs.push_back(art.smells(p.name));
        if (cfg.dump_graphs) {
            write_file(art.graph_dump(p.name), dump_text);
            outputs.push_back(art.graph_dump(p.name));
        }
        const auto labels = derive_labels(p.name, smells, build_activity(corpus, windows));
        for (const auto& lab : labels) {
            labels_csv.row({std::to_string(lab.developer), lab.project,
                            std::to_string(lab.silo), std::to_string(lab.lone_wolf),
                            std::to_string(lab.bottleneck), std::to_string(lab.smelly_developer),
                            std::to_string(lab.smelly_quitter)});
        }
    }
    outputs.push_back(art.labels());
    return outputs;
}

inline std::vector<std::string> stage_featurize(const RunConfig& cfg, const Artifacts& art) {
    require_artifact("featurize", art.labels());
    std::map<std::string, std::vector<DeveloperLabels>> labels_by_project;
    {
        const std::string text = read_file(art.labels());
        std::size_t pos = 0;
        std::vector<std::string> row;
        csv_next_record(text, pos, row); // header
        while (csv_next_record(text, pos, row)) {
            if (row.size() < 7) continue;
            DeveloperLabels lab;
            lab.developer = std::stoi(row[0]);
            lab.project = row[1];
            lab.silo = std::stoi(row[2]);
            lab.lone_wolf = std::stoi(row[3]);
            lab.bottleneck = std::stoi(row[4]);
            lab.smelly_developer = std::stoi(row[5]);
            lab.smelly_quitter = std::stoi(row[6]);
            labels_by_project[lab.project].push_back(lab);
        }
    }

    std::vector<Corpus> corpora;
    std::vector<const Corpus*> corpus_ptrs;
    std::map<std::string, std::vector<AnalysisWindow>> windows_by_project;
    for (const auto& p : cfg.projects) {
        require_artifact("featurize", art.corpus(p.name));
        corpora.push_back(corpus_from_json(nlohmann::json::parse(read_file(art.corpus(p.name)))));
        windows_by_project[p.name] = make_windows(corpora.back(), cfg.window_days);
    }
    for (const auto& c : corpora) corpus_ptrs.push_back(&c);

    Dataset ds = assemble_dataset(corpus_ptrs, labels_by_project, windows_by_project);
    const PruneResult pruned =
        prune_correlated(ds, cfg.correlation_threshold, cfg.paper_drop_list);

    write_dataset_csv(pruned.dataset, art.dataset());
    std::size_t smelly = 0;
    for (const auto& r : pruned.dataset.rows) smelly += r.smelly_developer;
    nlohmann::json summary = {
        {"rows", pruned.dataset.rows.size()},
        {"dropped_rows", ds.dropped_rows},
        {"smelly_developer_prevalence",
         pruned.dataset.rows.empty()
             ? 0.0
             : static_cast<double>(smelly) / static_cast<double>(pruned.dataset.rows.size())},
        {"active_features", pruned.dataset.active_features},
        {"dropped_features", pruned.dropped},
        {"warnings", pruned.warnings},
        {"assembly_warnings", ds.warnings}};
    write_file(art.featurize_summary(), summary.dump(1) + "\n");
    return {art.dataset(), art.featurize_summary()};
}

namespace detail {

inline Dataset load_active_dataset(const Artifacts& art, const char* stage) {
    require_artifact(stage, art.dataset());
    require_artifact(stage, art.featurize_summary());
    Dataset ds = read_dataset_csv(art.dataset());
    const auto summary = nlohmann::json::parse(read_file(art.featurize_summary()));
    ds.active_features = summary.at("active_features").get<std::vector<std::string>>();
    return ds;
}

inline bool both_classes_present(const Dataset& ds, const std::string& cls) {
    bool has0 = false, has1 = false;
    for (const auto& r : ds.rows) (r.class_value(cls) ? has1 : has0) = true;
    return has0 && has1;
}

} // namespace detail

inline std::vector<std::string> stage_train(const RunConfig& cfg, const Artifacts& art) {
    const Dataset ds = detail::load_active_dataset(art, "train");
    nlohmann::json selection = nlohmann::json::object();
    for (const auto& cls : cfg.classes) {
        nlohmann::json entry;
        if (!detail::both_classes_present(ds, cls)) {
            entry["skipped"] = "class has a single value in the dataset";
            selection[cls] = entry;
            continue;
        }
        const Dataset balanced =
            undersample(ds, cls, Rng::derive(cfg.seed, fnv1a64(cls)));
        Matrix x;
        std::vector<int> y;
        extract_xy(balanced, cls, x, y);

        double best_f = -1.0;
        Algorithm best_algorithm = cfg.classifiers.front();
        std::map<std::string, double> best_params;
        std::vector<std::string> warnings;
        nlohmann::json candidates = nlohmann::json::object();
        for (const Algorithm algorithm : cfg.classifiers) {
            const auto result = grid_search(algorithm, default_grid(algorithm), x, y, cfg.seed);
            warnings.insert(warnings.end(), result.warnings.begin(), result.warnings.end());
            candidates[algorithm_name(algorithm)] = {
                {"cv_f_measure", result.best_f_measure},
                {"hyper_parameters", result.best.hyper_parameters}};
            if (result.best_f_measure > best_f + 1e-12) {
                best_f = result.best_f_measure;
                best_algorithm = algorithm;
                best_params = result.best.hyper_parameters;
            }
        }
        entry["algorithm"] = algorithm_name(best_algorithm);
        entry["hyper_parameters"] = best_params;
        entry["cv_f_measure"] = best_f;
        entry["candidates"] = candidates;
        entry["rows"] = balanced.rows.size();
        if (!warnings.empty()) entry["warnings"] = warnings;
        selection[cls] = entry;
    }
    write_file(art.model_selection(), selection.dump(1) + "\n");
    return {art.model_selection()};
}

inline std::vector<std::string> stage_evaluate(const RunConfig& cfg, const Artifacts& art) {
    const Dataset ds = detail::load_active_dataset(art, "evaluate");
    require_artifact("evaluate", art.model_selection());
    const auto selection = nlohmann::json::parse(read_file(art.model_selection()));

    nlohmann::json reports = nlohmann::json::array();
    CsvWriter eval_csv(art.eval_csv());
    eval_csv.row({"class", "scenario", "median_precision", "median_recall", "median_f_measure",
                  "median_auc"});
    CsvWriter fold_csv(art.fold_metrics());
    fold_csv.row({"class", "scenario", "fold", "precision", "recall", "f_measure", "auc"});

    const auto write_report = [&](const EvalReport& r) {
        reports.push_back(r.to_json());
        eval_csv.row({r.class_name, r.scenario, fmt_double(r.median_precision, 6),
                      fmt_double(r.median_recall, 6), fmt_double(r.median_f_measure, 6),
                      fmt_double(r.median_auc, 6)});
        for (std::size_t i = 0; i < r.folds.size(); ++i) {
            const auto& m = r.folds[i];
            fold_csv.row({r.class_name, r.scenario, std::to_string(i),
                          fmt_double(m.precision, 6), fmt_double(m.recall, 6),
                          fmt_double(m.f_measure, 6), fmt_double(m.auc, 6)});
        }
    };

    for (const auto& cls : cfg.classes) {
        if (!selection.contains(cls) || selection[cls].contains("skipped")) continue;
        ClassifierSpec spec;
        spec.algorithm = algorithm_from_name(selection[cls].at("algorithm").get<std::string>());
        spec.hyper_parameters =
            selection[cls].at("hyper_parameters").get<std::map<std::string, double>>();

        const std::uint64_t cls_seed = Rng::derive(cfg.seed, fnv1a64(cls));
        const Dataset balanced = undersample(ds, cls, cls_seed);
        write_report(evaluate_cross_project(balanced, cls, spec, cls_seed, cfg.cv_repetitions,
                                            cfg.cv_folds));

        for (const auto& p : cfg.projects) {
            const Dataset within = within_project(ds, p.name);
            if (within.rows.size() < 2 || !detail::both_classes_present(within, cls)) continue;
            const Dataset within_balanced = undersample(within, cls, cls_seed);
            if (within_balanced.rows.size() < 2) continue;
            ClassifierSpec w_spec = spec;
            w_spec.seed = cls_seed;
            write_report(evaluate_within_project(within_balanced, cls, w_spec));
        }
    }
    write_file(art.eval_json(), reports.dump(1) + "\n");
    return {art.eval_json(), art.eval_csv(), art.fold_metrics()};
}

namespace detail {

struct GainTable {
    // feature -> gain samples (per class x repetition)
    std::map<std::string, std::vector<double>> samples;
    std::vector<std::string> notes;
    int bins = 10;

    // Classes whose balanced dataset is smaller than 4 rows per bin are
    // skipped: with one bin per row the estimate degenerates to H(Y) for
    // every feature and would drown the ranking in noise.
    void add(const Dataset& ds, const std::vector<std::string>& classes, int repetitions,
             std::uint64_t seed) {
        for (const auto& cls : classes) {
            if (!both_classes_present(ds, cls)) {
                notes.push_back("class " + cls + " skipped: single value in the dataset");
                continue;
            }
            bool size_checked = false;
            for (int rep = 0; rep < repetitions; ++rep) {
                const Dataset balanced = undersample(
                    ds, cls,
                    Rng::derive(seed, fnv1a64(cls) + static_cast<std::uint64_t>(rep)));
                if (!size_checked) {
                    size_checked = true;
                    if (balanced.rows.size() < static_cast<std::size_t>(4 * bins)) {
                        notes.push_back("class " + cls + " skipped: only " +
                                        std::to_string(balanced.rows.size()) +
                                        " balanced rows for " + std::to_string(bins) + " bins");
                        break;
                    }
                }
                const std::vector<int> labels = balanced.class_column(cls);
                for (const auto& f : ds.active_features)
                    samples[f].push_back(
                        information_gain(balanced.feature_column(f), labels, bins));
            }
        }
    }

    void write_csv(const std::string& path) const {
        std::vector<std::pair<std::string, double>> means;
        for (const auto& [f, v] : samples) {
            double m = 0;
            for (const double g : v) m += g;
            means.emplace_back(f, v.empty() ? 0.0 : m / static_cast<double>(v.size()));
        }
        std::sort(means.begin(), means.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        std::map<std::string, int> ranks;
        bool enough = true;
        for (const auto& [f, v] : samples)
            if (v.size() < 2) enough = false;
        if (enough && !samples.empty()) ranks = sk_esd(samples);
        CsvWriter w(path);
        w.row({"feature", "gain", "sk_rank"});
        for (const auto& [f, m] : means)
            w.row({f, fmt_double(m, 6),
                   ranks.count(f) ? std::to_string(ranks.at(f)) : std::string("1")});
    }
};

} // namespace detail

inline std::vector<std::string> stage_rank(const RunConfig& cfg, const Artifacts& art) {
    const Dataset ds = detail::load_active_dataset(art, "rank");

    detail::GainTable cross;
    cross.bins = cfg.gain_bins;
    cross.add(ds, cfg.classes, cfg.gain_repetitions, Rng::derive(cfg.seed, 31));
    cross.write_csv(art.gain_cross());

    detail::GainTable within;
    within.bins = cfg.gain_bins;
    for (const auto& p : cfg.projects) {
        Dataset w = within_project(ds, p.name);
        if (w.rows.size() < 4) continue;
        within.add(w, cfg.classes, cfg.gain_repetitions, Rng::derive(cfg.seed, 37));
    }
    if (within.samples.empty())
        within.add(ds, cfg.classes, cfg.gain_repetitions, Rng::derive(cfg.seed, 37));
    within.write_csv(art.gain_within());

    const nlohmann::json summary = {{"cross_notes", cross.notes},
                                    {"within_notes", within.notes},
                                    {"bins", cfg.gain_bins},
                                    {"repetitions", cfg.gain_repetitions}};
    write_file(art.rank_summary(), summary.dump(1) + "\n");
    return {art.gain_cross(), art.gain_within(), art.rank_summary()};
}

inline std::vector<std::string> stage_compare([[maybe_unused]] const RunConfig& cfg,
                                              const Artifacts& art) {
    const Dataset ds = detail::load_active_dataset(art, "compare");
    const PopulationComparison cmp = compare_populations(ds, "smelly_developer");

    CsvWriter w(art.comparison_csv());
    w.row({"feature", "p_value", "delta", "magnitude", "mean_smelly", "mean_non_smelly",
           "var_smelly", "var_non_smelly", "n_smelly", "n_non_smelly"});
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& f : cmp.features) {
        w.row({f.feature, fmt_double(f.p_value, 6), fmt_double(f.delta, 6),
               magnitude_name(f.magnitude), fmt_double(f.mean_smelly, 6),
               fmt_double(f.mean_non_smelly, 6), fmt_double(f.var_smelly, 6),
               fmt_double(f.var_non_smelly, 6), std::to_string(f.n_smelly),
               std::to_string(f.n_non_smelly)});
        rows.push_back({{"feature", f.feature},
                        {"p_value", f.p_value},
                        {"delta", f.delta},
                        {"magnitude", magnitude_name(f.magnitude)},
                        {"mean_smelly", f.mean_smelly},
                        {"mean_non_smelly", f.mean_non_smelly},
                        {"var_smelly", f.var_smelly},
                        {"var_non_smelly", f.var_non_smelly}});
    }
    nlohmann::json out = {{"rows", rows}, {"warnings", cmp.warnings}};
    write_file(art.comparison_json(), out.dump(1) + "\n");
    return {art.comparison_csv(), art.comparison_json()};
}

// ---------------------------------------------------------------------------
// Orchestration: runs one stage by name, or all of them with a manifest.

inline std::vector<std::string> run_stage(const std::string& name, const RunConfig& cfg,
                                          const Artifacts& art) {
    if (name == "ingest") return stage_ingest(cfg, art);
    if (name == "detect") return stage_detect(cfg, art);
    if (name == "featurize") return stage_featurize(cfg, art);
    if (name == "train") return stage_train(cfg, art);
    if (name == "evaluate") return stage_evaluate(cfg, art);
    if (name == "rank") return stage_rank(cfg, art);
    if (name == "compare") return stage_compare(cfg, art);
    throw ConfigError("unknown stage: " + name);
}

inline const std::vector<std::string>& all_stage_names() {
    static const std::vector<std::string> kStages = {"ingest", "detect", "featurize", "train",
                                                     "evaluate", "rank", "compare"};
    return kStages;
}

// Runs every stage in order, then writes the manifest (stage outputs with
// content digests, tool version, seed) and non-deterministic wall-clock
// timings to a separate file so the manifest stays byte-identical across
// reruns with the same inputs and seed.
inline void run_all(const RunConfig& cfg, const Artifacts& art) {
    nlohmann::json stages = nlohmann::json::array();
    nlohmann::json timings = nlohmann::json::array();
    for (const auto& stage : all_stage_names()) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::vector<std::string> outputs = run_stage(stage, cfg, art);
        const auto t1 = std::chrono::steady_clock::now();
        nlohmann::json files = nlohmann::json::array();
        for (const auto& path : outputs) {
            files.push_back({{"path", std::filesystem::path(path).filename().string()},
                             {"fnv1a64", fnv1a64_hex(read_file(path))}});
        }
        stages.push_back({{"stage", stage}, {"outputs", files}});
        timings.push_back(
            {{"stage", stage},
             {"milliseconds",
              std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()}});
    }
    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& p : cfg.projects) {
        inputs.push_back({{"project", p.name},
                          {"commits", fnv1a64_hex(read_file(p.commits))},
                          {"mailbox", fnv1a64_hex(read_file(p.mailbox))},
                          {"sentences", fnv1a64_hex(read_file(p.sentences))}});
    }
    const nlohmann::json manifest = {{"version", kToolVersion},
                                     {"seed", cfg.seed},
                                     {"inputs", inputs},
                                     {"stages", stages}};
    write_file(art.manifest(), manifest.dump(1) + "\n");
    write_file(art.timings(), timings.dump(1) + "\n");
}

} // namespace csmell
