#pragma once

#include "tollsim/mobsim.hpp"
#include "tollsim/network.hpp"
#include "tollsim/population.hpp"
#include "tollsim/router.hpp"
#include "tollsim/scoring.hpp"
#include "tollsim/tolling.hpp"
#include "tollsim/transit.hpp"
#include "tollsim/travel_time.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace tollsim {

using Rng = std::mt19937_64;

struct StrategyConfig {
    double w_select = 0.70;
    double w_reroute = 0.15;
    double w_mode_choice = 0.10;
    double w_time_mutation = 0.05;
    double mu_select = 1.0;
    double mu_mode = 1.0;
    Seconds time_mutation_range = 1800.0;
    double innovation_stop_fraction = 0.8;
    std::size_t max_plans = kDefaultMaxPlans;
    ModeSet modes{Mode::car, Mode::pt, Mode::walk, Mode::bike};  // mode-choice set

    /// Throws ConfigError for negative weights, zero total weight,
    /// non-positive temperatures, or a stop fraction outside [0, 1].
    void validate() const;
};

StrategyConfig strategy_config_from_json(const nlohmann::json& section);
nlohmann::json strategy_config_to_json(const StrategyConfig& config);

/// Logit probabilities exp(mu U_i) / sum exp(mu U_k), computed with a max
/// shift. Entries equal to -inf are unavailable and get probability 0.
std::vector<double> logit_probabilities(std::span<const double> utilities, double mu);

/// Samples an index from `logit_probabilities`. Throws Error when every
/// option is unavailable.
std::size_t choose_mode(std::span<const double> utilities, double mu, Rng& rng);

/// Shifts one uniformly chosen non-final activity end time by
/// uniform(-range, +range) seconds, rounded to whole seconds and clamped
/// between the neighbouring end times (and to [0, horizon)).
void mutate_departure_time(Plan& plan, Seconds range, Rng& rng, Seconds horizon = kHorizon);

/// Index of the plan to execute next. Unscored plans are tried first (the
/// oldest unscored one). Otherwise a logit draw over scores, or the best
/// score (lowest index on ties) when `best_only`.
std::size_t select_plan(const Person& person, double mu, Rng& rng, bool best_only);

/// Independent random stream for one person in one iteration.
Rng person_rng(std::uint64_t seed, std::string_view person_id, int iteration);

/// Everything one simulation run reads. Owned by the caller; the loop never
/// mutates it.
struct Scenario {
    Network net;
    TransitSchedule transit;
    std::optional<TollScheme> toll;
    std::optional<Cordon> cordon;  // analysis region, present with or without a toll
    ScoringParams scoring;
    StrategyConfig strategy;
    MobsimConfig mobsim;
};

/// Routes and prices plans against one travel-time field.
class PlanRouter {
public:
    PlanRouter(const Scenario& scenario, const TravelTimeField& ttf);

    /// Routes the legs of `plan` for their current modes, chaining estimated
    /// arrival times into later departures. With `only_unrouted`, legs that
    /// already carry a route keep it. Returns false when a pt leg has no
    /// service (the plan is left partially routed).
    bool route_plan(Plan& plan, bool toll_exempt, bool only_unrouted = false) const;

    /// Sum of estimated leg utilities of a routed plan (travel times from the
    /// field or schedule, tolls under the scheme's charging rules).
    double estimate(const Plan& plan, bool toll_exempt) const;

    /// Copy of `plan` with every leg switched to `mode` and routed, or none
    /// when the mode cannot serve every leg.
    std::optional<Plan> with_mode(const Plan& plan, Mode mode, bool toll_exempt) const;

    const CarRouter& car_router() const { return router_; }

private:
    Point point_of(const Activity& a) const;

    const Scenario& scenario_;
    const TravelTimeField& ttf_;
    CarRouter router_;
};

struct IterationStats {
    int iteration = 0;
    double mean_score = 0.0;
    double std_score = 0.0;
    PerMode<double> mode_share{};  // fraction of executed legs
    std::size_t cordon_entries = 0;
    std::size_t pt_boardings = 0;
    std::size_t stuck = 0;
    double convergence_metric = 0.0;
};

struct ScoreRow {
    int iteration = 0;
    std::uint32_t person = 0;
    std::optional<double> score;
    bool executed = false;
};

struct RunOptions {
    int iterations = 1;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    /// Called after each iteration with that iteration's stats.
    std::function<void(const IterationStats&)> on_iteration;
};

struct RunResult {
    Population population;  // final plan memories, scored
    std::vector<IterationStats> stats;
    std::vector<ScoreRow> scores;
    EventStream final_events;
    std::vector<StuckAgent> final_stuck;
    bool converged = false;
    double convergence_metric = 0.0;
};

inline constexpr int kConvergenceWindow = 5;
inline constexpr double kConvergenceThreshold = 0.01;

/// max over the last five consecutive changes of the mean score, each
/// relative to (|mean| + 1); infinite before the first change.
double convergence_metric(std::span<const double> means);
bool is_converged(std::span<const double> means);

/// Runs the co-evolutionary loop: iteration 0 executes the initial plans
/// (routing any unrouted legs at free flow); every later iteration replans
/// each person, runs the mobsim, and scores the executed plans. Innovation
/// stops from iteration floor(N * innovation_stop_fraction), after which
/// persons select their best plan. Results do not depend on `threads`.
/// Errors are rethrown with the iteration index prepended.
RunResult run_iterations(const Scenario& scenario, Population population, const RunOptions& options);

}  // namespace tollsim
