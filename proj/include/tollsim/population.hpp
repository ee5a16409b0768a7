#pragma once

#include "tollsim/network.hpp"
#include "tollsim/types.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tollsim {

inline constexpr std::size_t kDefaultMaxPlans = 5;

struct Activity {
    std::string kind;
    LinkIndex link = 0;
    /// Absent only for the final, open-ended activity.
    std::optional<Seconds> end_time;
    Seconds typical_duration = 0.0;

    friend bool operator==(const Activity&, const Activity&) = default;
};

/// Links traversed after leaving the origin activity. The first link starts
/// at the origin link's downstream node; the last link is the destination
/// activity link. Empty iff origin and destination coincide.
struct CarRoute {
    std::vector<LinkIndex> links;
    friend bool operator==(const CarRoute&, const CarRoute&) = default;
};

/// Direct transit ride (no transfers). `walk_only` marks trips where walking
/// all the way beats every line; those execute as a single walk.
struct PtRoute {
    std::string line;
    std::size_t board_stop = 0;
    std::size_t alight_stop = 0;
    bool walk_only = false;
    friend bool operator==(const PtRoute&, const PtRoute&) = default;
};

/// Walk and bike legs: crow-fly distance between activity locations.
struct TeleportRoute {
    double distance = 0.0;
    friend bool operator==(const TeleportRoute&, const TeleportRoute&) = default;
};

using Route = std::variant<std::monostate, CarRoute, PtRoute, TeleportRoute>;

struct Leg {
    Mode mode = Mode::car;
    std::optional<Seconds> departure_time;
    Route route;

    bool routed() const { return !std::holds_alternative<std::monostate>(route); }
    friend bool operator==(const Leg&, const Leg&) = default;
};

/// Activity/leg chain: activities[i], legs[i], activities[i + 1], ...
struct Plan {
    std::vector<Activity> activities;
    std::vector<Leg> legs;
    std::optional<double> score;

    friend bool operator==(const Plan&, const Plan&) = default;
};

struct Person {
    std::string id;
    bool toll_exempt = false;
    std::vector<Plan> plans;  // oldest first
    std::size_t selected = 0;

    Plan& selected_plan() { return plans.at(selected); }
    const Plan& selected_plan() const { return plans.at(selected); }

    friend bool operator==(const Person&, const Person&) = default;
};

struct Population {
    std::vector<Person> persons;
    friend bool operator==(const Population&, const Population&) = default;
};

/// Returns an error message when the plan breaks alternation or timing
/// invariants, or a car route does not connect its activities.
std::optional<std::string> check_plan(const Network& net, const Plan& plan);

/// Returns an error message when `route` is not a connected path from the
/// origin activity link to the destination activity link.
std::optional<std::string> check_car_route(const Network& net, LinkIndex origin, LinkIndex dest,
                                           const CarRoute& route);

/// Adds `plan` to the memory and selects it. When the memory would exceed
/// `max_plans`, the worst-scored existing plan is evicted first (unscored
/// counts as worst; ties evict the oldest, passing over the selected plan).
void add_plan(Person& person, Plan plan, std::size_t max_plans = kDefaultMaxPlans);

Population population_from_json(const nlohmann::json& doc, const Network& net);
nlohmann::json population_to_json(const Population& pop, const Network& net);
Population load_population(const std::filesystem::path& path, const Network& net);
void save_population(const Population& pop, const Network& net, const std::filesystem::path& path);

}  // namespace tollsim
