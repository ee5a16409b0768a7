// tollsim: generate scenarios, run the simulation loop, analyze run directories.

#include "tollsim/generate.hpp"
#include "tollsim/rundir.hpp"
#include "tollsim/scenario.hpp"

#include <CLI11.hpp>

#include <fmt/format.h>

#include <cstdio>
#include <iostream>

namespace fs = std::filesystem;
using namespace tollsim;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

int cmd_generate(const std::string& kind, const fs::path& out, int agents, std::uint64_t seed, int size)
{
    GeneratedScenario s = [&] {
        if (kind == "grid-city") {
            GridCityParams p;
            p.rows = p.cols = size;
            p.seed = seed;
            if (agents > 0)
                p.agents = agents;
            return generate_grid_city(p);
        }
        if (kind == "pigou") {
            PigouParams p;
            if (agents > 0)
                p.agents = agents;
            return generate_pigou(p);
        }
        if (kind == "two-route-cordon") {
            TwoRouteCordonParams p;
            p.seed = seed;
            if (agents > 0)
                p.agents = agents;
            return generate_two_route_cordon(p);
        }
        throw ConfigError("unknown scenario kind '" + kind + "' (expected grid-city, pigou or two-route-cordon)");
    }();
    write_scenario(s, out);
    fmt::print("wrote {} scenario to {} ({} nodes, {} links, {} persons, {} transit lines)\n", kind, out.string(),
               s.net.node_count(), s.net.link_count(), s.population.persons.size(), s.lines.size());
    return 0;
}

struct RunFlags {
    fs::path config;
    std::optional<std::uint64_t> seed;
    std::optional<int> iterations;
    std::optional<std::string> out;
    std::optional<std::string> toll_preset;
    std::optional<double> toll_amount;
    std::optional<unsigned> threads;
    bool no_toll = false;
    bool quiet = false;
};

int cmd_run(const RunFlags& f)
{
    ScenarioConfig config = load_config(f.config);
    if (f.seed)
        config.seed = *f.seed;
    if (f.iterations) {
        if (*f.iterations < 1)
            throw ConfigError("--iterations must be at least 1");
        config.iterations = *f.iterations;
    }
    if (f.out)
        config.output = fs::absolute(*f.out);
    if (f.threads)
        config.threads = *f.threads;
    apply_toll_overrides(config, {f.toll_preset, f.toll_amount, f.no_toll});

    // Config-level problems exit with 1; everything from loading files on is a runtime error.
    LoadedScenario loaded = load_scenario(config);
    RunOptions options;
    options.iterations = config.iterations;
    options.seed = config.seed;
    options.threads = config.threads;
    if (!f.quiet)
        options.on_iteration = [](const IterationStats& s) {
            fmt::print(stderr, "iteration {:3d}  mean score {:10.4f}  car {:.3f}  pt {:.3f}  cordon entries {}\n",
                       s.iteration, s.mean_score, at(s.mode_share, Mode::car), at(s.mode_share, Mode::pt),
                       s.cordon_entries);
        };
    RunResult result = run_iterations(loaded.scenario, std::move(loaded.population), options);
    const fs::path dir = config.resolve(config.output);
    write_run_dir(dir, config, loaded.scenario, result);
    fmt::print("run written to {} (converged: {}, stuck: {})\n", dir.string(), result.converged ? "yes" : "no",
               result.final_stuck.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Agent-based transport simulation with cordon tolling"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version()));

    std::string kind;
    fs::path gen_out;
    int agents = 0;
    std::uint64_t gen_seed = 1;
    int size = 10;
    auto* gen = app.add_subcommand("generate", "Write a synthetic scenario");
    gen->add_option("--kind", kind, "grid-city | pigou | two-route-cordon")->required();
    gen->add_option("--out", gen_out, "Output directory")->required();
    gen->add_option("--agents", agents, "Number of persons (default per kind)");
    gen->add_option("--seed", gen_seed, "Generator seed");
    gen->add_option("--size", size, "Grid rows and columns (grid-city)");

    RunFlags rf;
    auto* run = app.add_subcommand("run", "Run the iteration loop for a scenario config");
    run->add_option("--config", rf.config, "Scenario config file")->required();
    run->add_option("--seed", rf.seed, "Override the master seed");
    run->add_option("--iterations", rf.iterations, "Override the iteration count");
    run->add_option("--out", rf.out, "Override the run directory");
    run->add_option("--toll-preset", rf.toll_preset, "Use a named toll preset (nyc-cbd-base)");
    run->add_option("--toll-amount", rf.toll_amount, "Replace every toll period amount (dollars)");
    run->add_option("--threads", rf.threads, "Replanning worker threads");
    run->add_flag("--no-toll", rf.no_toll, "Disable tolling (baseline run)");
    run->add_flag("--quiet", rf.quiet, "No per-iteration progress");

    fs::path run_dir;
    std::size_t hour = 17;
    fs::path analyze_out;
    auto* analyze = app.add_subcommand("analyze", "Write analysis tables for a run directory");
    analyze->add_option("run_dir", run_dir, "Run directory")->required();
    analyze->add_option("--hour", hour, "Hour for the GeoJSON export");
    analyze->add_option("--out", analyze_out, "Output directory (default RUN_DIR/analysis)");

    fs::path dir_a;
    fs::path dir_b;
    fs::path compare_out;
    bool force = false;
    auto* compare = app.add_subcommand("compare", "Compare a baseline run with a policy run");
    compare->add_option("baseline", dir_a, "Baseline run directory")->required();
    compare->add_option("policy", dir_b, "Policy run directory")->required();
    compare->add_option("--out", compare_out, "Report directory")->required();
    compare->add_flag("--force", force, "Compare despite seed or network mismatch");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*gen)
            return cmd_generate(kind, gen_out, agents, gen_seed, size);
        if (*run)
            return cmd_run(rf);
        if (*analyze) {
            analyze_run(run_dir, hour, analyze_out.empty() ? run_dir / "analysis" : analyze_out);
            fmt::print("analysis written to {}\n", (analyze_out.empty() ? run_dir / "analysis" : analyze_out).string());
            return 0;
        }
        if (*compare) {
            compare_runs(dir_a, dir_b, compare_out, force);
            fmt::print("comparison written to {}\n", compare_out.string());
            return 0;
        }
    } catch (const ConfigError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitRuntime;
    }
    return kExitUsage;
}
