#pragma once

#include "tollsim/network.hpp"
#include "tollsim/population.hpp"
#include "tollsim/scoring.hpp"
#include "tollsim/tolling.hpp"
#include "tollsim/travel_time.hpp"

namespace tollsim {

/// Outcome of driving a fixed route from a departure time.
struct RouteCost {
    Seconds arrival = 0.0;
    double tolls = 0.0;        // dollars, one charge per chargeable link entered
    double generalized = 0.0;  // seconds: travel time + tolls converted at the scoring exchange rate
};

/// Time-dependent least-generalized-cost car router.
///
/// Generalized cost of a route is its travel time under the travel-time
/// field plus, for every chargeable link entered, the toll due at the entry
/// time converted to seconds via beta_money / |beta_trav car|. The router
/// charges every chargeable entry (it does not know about earlier
/// crossings that day), so its toll is an upper bound on what the mobsim
/// will charge.
///
/// The search is exact over node-simple paths: a best-first label search
/// keyed on cost plus a free-flow lower bound, where a label only prunes
/// another at the same node if it arrives no later and its toll lead covers
/// the largest possible toll drop over the remaining chargeable links.
/// If that search outgrows a label budget (large networks with a rate drop
/// inside the trip window) it restarts with plain (time, toll) dominance,
/// which is exact whenever the rate does not drop during the trip. Among equal-cost routes the lexicographically smallest link-id sequence
/// wins.
class CarRouter {
public:
    /// `toll` may be null. The field and scheme must outlive the router.
    CarRouter(const Network& net, const TravelTimeField& ttf, const TollScheme* toll, const ScoringParams& params);

    /// Throws RoutingError when `dest` cannot be reached from `origin`.
    CarRoute route(LinkIndex origin, LinkIndex dest, Seconds departure, bool toll_exempt = false) const;

    RouteCost evaluate(const CarRoute& route, Seconds departure, bool toll_exempt = false) const;

    Seconds toll_seconds_per_dollar() const { return seconds_per_dollar_; }

private:
    const Network& net_;
    const TravelTimeField& ttf_;
    const TollScheme* toll_;
    Seconds seconds_per_dollar_;
};

}  // namespace tollsim
