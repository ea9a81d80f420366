#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mrftrack/config.hpp"
#include "mrftrack/csv_io.hpp"
#include "mrftrack/error.hpp"
#include "mrftrack/harness.hpp"
#include "mrftrack/pgm.hpp"
#include "mrftrack/simulator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mrftrack;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kIo = 3 };

/// One `--dotted.key VALUE` option per configuration leaf.
struct Overrides {
    std::vector<std::pair<std::string, json>> leaves;
    std::map<std::string, std::string> values;

    void attach(CLI::App& app, std::vector<std::pair<std::string, json>> keys) {
        leaves = std::move(keys);
        for (const auto& [key, example] : leaves) {
            app.add_option("--" + key, values[key], "default: " + example.dump())
                ->group("Configuration overrides");
        }
    }

    void apply(json& j, CLI::App& app) const {
        for (const auto& [key, example] : leaves) {
            if (app.count("--" + key) > 0) {
                set_dotted(j, key, values.at(key), example);
            }
        }
    }
};

json load_or_empty(const std::string& path) {
    return path.empty() ? json::object() : load_json_file(path);
}

void print_report(const RunReport& r) {
    std::printf("%s: %zu failures over %zu frames (%lld equivalent), mean distance %.3f px, "
                "max %.3f px, %.1f s\n",
                r.label.c_str(), r.total_failures, r.sequence_frames, r.equivalent_failures,
                r.mean_distance, r.max_distance, r.wall_seconds);
}

std::vector<std::pair<std::string, json>> compare_leaves() {
    auto leaves = run_config_leaves();
    leaves.emplace_back("compare.jobs", json(std::size_t{1}));
    leaves.emplace_back("compare.seeds.first", json(std::uint64_t{1}));
    leaves.emplace_back("compare.seeds.count", json(std::size_t{20}));
    return leaves;
}

std::string frame_file(std::size_t number) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%06zu.pgm", number);
    return buf;
}

int cmd_simulate(const std::string& config_path, const Overrides& ov, CLI::App& app,
                 const std::string& out_dir, const std::string& patches_dir) {
    json j = load_or_empty(config_path);
    ov.apply(j, app);
    const ScenarioConfig cfg = scenario_from_json(j);

    ScenarioStream stream(cfg);
    PoseTrack truth;
    std::vector<LabeledFrame> prefix;
    while (!stream.done()) {
        LabeledFrame lf = stream.next();
        write_pgm(fs::path(out_dir) / frame_file(lf.index + 1), lf.frame);
        truth.frames.push_back(lf.truth);
        if (!patches_dir.empty() && prefix.size() < 5) {
            prefix.push_back(std::move(lf));
        }
    }
    write_pose_csv(fs::path(out_dir) / "groundtruth.csv", truth);
    write_file_atomic(fs::path(out_dir) / "scenario.json", to_json(cfg).dump(2) + "\n");

    if (!patches_dir.empty()) {
        Rng rng = make_rng(cfg.rng_seed, 200);
        const TrainingPatches p = collect_training_patches(prefix, cfg.agent_dims, rng);
        for (std::size_t k = 0; k < p.foreground.size(); ++k) {
            write_patch_pgm(fs::path(patches_dir) / "fg" / (std::to_string(k) + ".pgm"),
                            p.foreground[k], cfg.agent_dims);
        }
        for (std::size_t k = 0; k < p.background.size(); ++k) {
            write_patch_pgm(fs::path(patches_dir) / "bg" / (std::to_string(k) + ".pgm"),
                            p.background[k], cfg.agent_dims);
        }
    }
    std::printf("wrote %d frames and groundtruth for %d agents to %s\n", cfg.n_frames,
                cfg.n_agents, out_dir.c_str());
    return kOk;
}

int cmd_run(const std::string& config_path, const Overrides& ov, CLI::App& app) {
    json j = load_or_empty(config_path);
    ov.apply(j, app);
    const RunConfig cfg = run_config_from_json(j);
    print_report(run_experiment(cfg));
    return kOk;
}

int cmd_compare(const std::string& config_path, const Overrides& ov, CLI::App& app) {
    json j = load_or_empty(config_path);
    ov.apply(j, app);
    const CompareConfig cfg = compare_config_from_json(j);
    const std::vector<CompareRow> rows = run_compare(cfg);
    const std::string table = compare_table_csv(rows);
    if (!cfg.output_dir.empty()) {
        write_file_atomic(fs::path(cfg.output_dir) / "table.csv", table);
    }
    std::cout << table;
    return kOk;
}

int cmd_eval(const std::string& estimates, const std::string& groundtruth, double threshold,
             int reference_frames, const std::string& out_dir) {
    if (!(threshold > 0.0)) {
        throw ConfigError("failure_threshold must be > 0");
    }
    const PoseTrack est = read_pose_csv(estimates);
    const PoseTrack truth = read_pose_csv(groundtruth);
    RunReport report;
    report.label = "eval";
    report.sequence_frames = truth.frame_count();
    report.frames = evaluate_estimates(est, truth, threshold);
    summarize(report, reference_frames);
    if (!out_dir.empty()) {
        write_file_atomic(fs::path(out_dir) / "metrics.csv", metrics_csv(report));
    }
    print_report(report);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-target tracking with an MCMC-MRF joint particle filter"};
    app.require_subcommand(1);

    std::string sim_config;
    std::string sim_out;
    std::string sim_patches;
    Overrides sim_ov;
    auto* sim = app.add_subcommand("simulate", "Render an ant-arena scenario to PGM frames");
    sim->add_option("-c,--config", sim_config, "Scenario JSON file");
    sim->add_option("-o,--out", sim_out, "Output directory")->required();
    sim->add_option("--training-patches", sim_patches,
                    "Also write fg/ and bg/ template training patches here");
    sim_ov.attach(*sim, json_leaves(to_json(ScenarioConfig{})));

    std::string run_config;
    Overrides run_ov;
    auto* run = app.add_subcommand("run", "Track one sequence and write metrics");
    run->add_option("-c,--config", run_config, "Run configuration JSON file");
    run_ov.attach(*run, run_config_leaves());

    std::string cmp_config;
    Overrides cmp_ov;
    auto* cmp = app.add_subcommand("compare", "Run a tracker x particle-count x seed matrix");
    cmp->add_option("-c,--config", cmp_config, "Comparison JSON file")->required();
    cmp_ov.attach(*cmp, compare_leaves());

    std::string eval_est;
    std::string eval_truth;
    std::string eval_out;
    double eval_threshold = 50.0;
    int eval_reference = 10400;
    auto* eval = app.add_subcommand("eval", "Recompute metrics from stored estimates");
    eval->add_option("--estimates", eval_est, "estimates.csv of a run")->required();
    eval->add_option("--groundtruth", eval_truth, "Groundtruth CSV")->required();
    eval->add_option("--failure_threshold", eval_threshold, "Failure distance, pixels")
        ->capture_default_str();
    eval->add_option("--reference_frames", eval_reference, "Frame count failures are scaled to")
        ->capture_default_str();
    eval->add_option("-o,--out", eval_out, "Directory for metrics.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    try {
        if (*sim) {
            return cmd_simulate(sim_config, sim_ov, *sim, sim_out, sim_patches);
        }
        if (*run) {
            return cmd_run(run_config, run_ov, *run);
        }
        if (*cmp) {
            return cmd_compare(cmp_config, cmp_ov, *cmp);
        }
        if (*eval) {
            return cmd_eval(eval_est, eval_truth, eval_threshold, eval_reference, eval_out);
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error:\n" << e.what() << '\n';
        return kConfig;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kOther;
    }
    return kOther;
}
