#pragma once

#include "tollsim/analysis.hpp"
#include "tollsim/replanning.hpp"
#include "tollsim/scenario.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace tollsim {

std::string_view version();

/// Per-iteration stats table (one row per iteration).
std::string stats_csv(std::span<const IterationStats> stats);
/// iteration,person,score,executed_flag; one row per memorized plan.
std::string scores_csv(std::span<const ScoreRow> rows, const Population& pop);

/// Writes config.json (resolved snapshot), stats.csv, events.csv (final
/// iteration), scores.csv, population.json (final, scored) and
/// metadata.json. Contents depend only on the inputs, never on wall time.
void write_run_dir(const std::filesystem::path& dir, const ScenarioConfig& config, const Scenario& scenario,
                   const RunResult& result);

/// Everything analysis needs from a finished run.
struct RunArtifacts {
    ScenarioConfig config;
    nlohmann::json metadata;
    Network net;
    EventStream events;
    Population population;
    std::optional<Cordon> cordon;
};

/// Throws Error naming the first missing file of an incomplete run dir.
RunArtifacts load_run_dir(const std::filesystem::path& dir);

/// Writes link_volumes.csv, pt_ridership.csv, mode_counts.csv,
/// score_stats.csv, cordon.csv (when a cordon is configured) and
/// links_hHH.geojson (two-digit hour) into `out`.
void analyze_run(const std::filesystem::path& dir, std::size_t hour, const std::filesystem::path& out);

/// Baseline `a` against policy `b`: mode_share.csv, score_stats.csv,
/// link_volume_deltas.csv, cordon_deltas.csv and summary.txt. Refuses runs
/// with different seeds or networks unless `force`.
void compare_runs(const std::filesystem::path& a, const std::filesystem::path& b, const std::filesystem::path& out,
                  bool force);

}  // namespace tollsim
