#pragma once

#include "tollsim/events.hpp"
#include "tollsim/network.hpp"
#include "tollsim/population.hpp"
#include "tollsim/types.hpp"

#include <nlohmann/json_fwd.hpp>

#include <array>
#include <map>
#include <string>
#include <vector>

namespace tollsim {

template <typename T>
using PerMode = std::array<T, 4>;

template <typename T>
constexpr T& at(PerMode<T>& a, Mode m)
{
    return a[static_cast<std::size_t>(m)];
}
template <typename T>
constexpr const T& at(const PerMode<T>& a, Mode m)
{
    return a[static_cast<std::size_t>(m)];
}

/// Utility coefficients. Rates are per hour; money is in dollars.
struct ScoringParams {
    double beta_perf = 6.0;
    PerMode<double> beta_trav{-6.0, -6.0, -12.0, -8.0};  // car, pt, walk, bike
    PerMode<double> mode_constant{-1.0, 0.0, 0.0, 0.0};
    double beta_money = 0.5;
    PerMode<double> monetary_rate{0.0, 0.0, 0.0, 0.0};  // $/km
    double pt_fare = 2.75;
    std::map<std::string, Seconds> typical_duration{
        {"home", 12.0 * kSecondsPerHour},   {"work", 8.0 * kSecondsPerHour},
        {"shop", 1.0 * kSecondsPerHour},    {"leisure", 2.0 * kSecondsPerHour},
        {"education", 6.0 * kSecondsPerHour},
    };

    /// Throws ConfigError on beta_perf <= 0, beta_money <= 0, positive beta_trav,
    /// negative monetary rates, or non-positive typical durations.
    void validate() const;

    /// Seconds of car travel a driver would trade for one dollar.
    double seconds_per_dollar(Mode mode = Mode::car) const;
};

ScoringParams scoring_params_from_json(const nlohmann::json& section);
nlohmann::json scoring_params_to_json(const ScoringParams& params);

/// Logarithmic activity performance utility:
///   beta_perf * t_typ * ln(max(duration, 1 s) / t0),  t0 = t_typ * exp(-10 h / t_typ)
/// with t_typ in hours. Throws ScoringError for kinds without a typical duration.
double activity_utility(Seconds duration, const std::string& kind, const ScoringParams& params);

struct LegCost {
    Mode mode = Mode::car;
    Seconds travel_time = 0.0;
    double distance = 0.0;   // m
    double toll_paid = 0.0;  // dollars, >= 0
    bool pays_fare = false;  // pt legs that boarded a vehicle
};

/// mode_constant + beta_trav * hours + beta_money * (-rate * km - fare) + beta_money * tau,
/// with tau = -toll_paid.
double leg_utility(const LegCost& leg, const ScoringParams& params);

struct ScoreItem {
    enum class Element : std::uint8_t { activity, leg } element = Element::activity;
    std::size_t index = 0;
    double utility = 0.0;
};

struct ScoredPlan {
    double total = 0.0;
    std::vector<ScoreItem> breakdown;
    bool complete = true;
};

struct ScoreOptions {
    /// Accept streams that stop mid-plan (stuck agents): the open leg runs to
    /// `horizon` and unreached activities score nothing.
    bool allow_incomplete = false;
    Seconds horizon = kHorizon;
};

/// Scores an executed plan from that person's events (in stream order).
/// Throws ScoringError when the events do not match the plan.
ScoredPlan score_plan(const Plan& plan, std::span<const Event> events, const ScoringParams& params,
                      const Network& net, const ScoreOptions& options = {});

}  // namespace tollsim
