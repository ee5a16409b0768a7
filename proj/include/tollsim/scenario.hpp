#pragma once

#include "tollsim/population.hpp"
#include "tollsim/replanning.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tollsim {

/// Scenario config file. Relative paths resolve against the directory that
/// holds the config file.
struct ScenarioConfig {
    std::filesystem::path base_dir;
    std::filesystem::path network;
    std::filesystem::path population;
    std::filesystem::path transit;  // optional
    nlohmann::json scoring;         // null: defaults
    nlohmann::json toll;            // null: no toll
    nlohmann::json strategy;        // null: defaults
    /// Cordon used for analysis; defaults to the toll region.
    std::vector<std::string> cordon;
    int iterations = 10;
    double scale = 1.0;
    std::uint64_t seed = 1;
    std::filesystem::path output = "output";
    unsigned threads = 1;

    std::filesystem::path resolve(const std::filesystem::path& p) const;
};

/// Throws ConfigError for missing or ill-typed fields, N < 1 or scale
/// outside (0, 1].
ScenarioConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
ScenarioConfig load_config(const std::filesystem::path& path);
/// Resolved form: every path absolute, so a snapshot works from anywhere.
nlohmann::json config_to_json(const ScenarioConfig& config);

struct TollOverrides {
    std::optional<std::string> preset;
    std::optional<double> amount;
    bool no_toll = false;
};

/// Applies command-line toll overrides to the config's toll section.
void apply_toll_overrides(ScenarioConfig& config, const TollOverrides& overrides);

struct LoadedScenario {
    Scenario scenario;
    Population population;
};

/// Loads every referenced file and builds the scheme, cordon and params.
LoadedScenario load_scenario(const ScenarioConfig& config);

}  // namespace tollsim
