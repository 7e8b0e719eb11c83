// Command-line front end for the community smell mining pipeline.
//
// Exit codes: 0 success, 1 configuration error, 2 missing upstream artifact,
// 3 data error.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "csmell/pipeline.hpp"
#include "csmell/synth.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

int run_pipeline_command(const std::string& stage, const CommonOptions& opt) {
    csmell::RunConfig cfg = csmell::load_config(opt.config_path);
    if (opt.seed_set) cfg.seed = opt.seed;
    if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
    const csmell::Artifacts art{cfg.out_dir};
    std::filesystem::create_directories(art.out);
    if (stage == "all") {
        csmell::run_all(cfg, art);
        std::cout << "all stages complete; manifest at " << art.manifest() << "\n";
    } else {
        const auto outputs = csmell::run_stage(stage, cfg, art);
        for (const auto& path : outputs) std::cout << "wrote " << path << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"community smell detection and sentiment-based prediction pipeline"};
    app.require_subcommand(1);

    CommonOptions opt;
    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opt.config_path, "run configuration (JSON)")->required();
        cmd->add_option("--seed", opt.seed, "override the configured seed")
            ->each([&](const std::string&) { opt.seed_set = true; });
        cmd->add_option("--out", opt.out_dir, "override the configured output directory");
    };

    for (const auto& stage : csmell::all_stage_names()) add_common(app.add_subcommand(
        stage, std::string("run the ") + stage + " stage"));
    add_common(app.add_subcommand("all", "run every stage and write the manifest"));

    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus with planted smells");
    csmell::SynthSpec spec;
    std::string synth_out = "synth_out";
    synth->add_option("--out", synth_out, "output directory")->required();
    synth->add_option("--seed", spec.seed, "generator seed");
    synth->add_option("--project", spec.project, "project name");
    synth->add_option("--teams", spec.teams, "mainland team count");
    synth->add_option("--team-size", spec.team_size, "members per team");
    synth->add_option("--isolated-teams", spec.isolated_teams, "island team count");
    synth->add_option("--wolf-pairs", spec.lone_wolf_pairs, "planted lone wolf pairs");
    synth->add_option("--silo-pairs", spec.silo_pairs, "planted organizational silo pairs");
    synth->add_option("--bottleneck-pairs", spec.bottleneck_pairs, "planted bottleneck pairs");
    synth->add_option("--satellite-size", spec.satellite_team_size,
                      "members per bottleneck satellite team");
    synth->add_option("--quitters", spec.quitters, "smelly developers who quit");
    synth->add_option("--windows", spec.windows, "analysis window count");
    synth->add_option("--window-days", spec.window_days, "days per window");
    synth->add_option("--sentences", spec.sentences_per_dev, "sentences per developer");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            const auto truth = csmell::generate_synthetic_corpus(spec, synth_out);
            std::cout << "synthetic corpus in " << synth_out << ": " << truth.smelly().size()
                      << " smelly developers planted\n";
            return 0;
        }
        return run_pipeline_command(app.get_subcommands().front()->get_name(), opt);
    } catch (const csmell::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const csmell::MissingArtifact& e) {
        std::cerr << "missing artifact: " << e.what() << "\n";
        return 2;
    } catch (const csmell::ParseError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    }
}
