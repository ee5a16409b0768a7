#pragma once

#include "tollsim/network.hpp"
#include "tollsim/population.hpp"
#include "tollsim/transit.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tollsim {

struct GeneratedScenario {
    Network net;
    std::vector<TransitLine> lines;
    Population population;
    /// Config document referring to the sibling files written by
    /// write_scenario (network.json, population.json, transit.json).
    nlohmann::json config;
};

struct GridCityParams {
    int rows = 10;
    int cols = 10;
    double spacing = 400.0;      // m
    int agents = 1000;
    std::uint64_t seed = 1;
    double cbd_work_share = 0.6;
    double capacity = 900.0;     // veh/h per link
    double free_speed = 13.9;    // m/s
    double exempt_share = 0.02;
};

/// Square-ish grid with two directed links per neighbouring node pair, a
/// central cordon block, and bidirectional transit lines along three rows and
/// three columns (one of each through the centre). Agents live anywhere and
/// work in the cordon with probability cbd_work_share.
GeneratedScenario generate_grid_city(const GridCityParams& params);

/// Node ids of the central block of a grid (rows/cols floor(n/2)-2 ..
/// floor(n/2)+1, i.e. 3..6 on a 10x10 grid).
std::vector<std::string> grid_cordon(int rows, int cols);
std::string grid_node_id(int r, int c);

struct PigouParams {
    int agents = 1000;
    Seconds first_departure = 8 * 3600.0;
    Seconds last_departure = 9 * 3600.0;
    double capacity_b = 1800.0;
};

/// Two parallel routes between s and t: A (6000 m at 10 m/s, effectively
/// unlimited capacity) and B (3000 m at 10 m/s, capacity_b veh/h, one lane).
/// Every agent drives home -> work once, departures evenly spaced.
GeneratedScenario generate_pigou(const PigouParams& params);

struct TwoRouteCordonParams {
    int agents = 100;
    std::uint64_t seed = 1;
};

/// Home and work on either side of a two-node cordon; a direct route crosses
/// it and a longer bypass avoids it.
GeneratedScenario generate_two_route_cordon(const TwoRouteCordonParams& params);

/// Writes network.json, population.json, transit.json (when there are
/// lines) and config.json into `dir`.
void write_scenario(const GeneratedScenario& scenario, const std::filesystem::path& dir);

}  // namespace tollsim
