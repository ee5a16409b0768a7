#pragma once

#include "tollsim/events.hpp"
#include "tollsim/network.hpp"
#include "tollsim/population.hpp"
#include "tollsim/tolling.hpp"
#include "tollsim/transit.hpp"

#include <deque>
#include <limits>
#include <queue>
#include <set>
#include <vector>

namespace tollsim {

inline constexpr double kEffectiveVehicleLength = 7.5;  // m

struct MobsimConfig {
    /// Flow-scaling factor in (0, 1]: capacities and storage scale with the
    /// simulated population fraction.
    double scale = 1.0;
    int horizon = kHorizon;
};

/// max(1, floor(length * lanes / 7.5 m) * scale)
double storage_capacity(const Link& link, double scale);
/// Outflow credit gained per 1 s step.
double flow_per_step(const Link& link, double scale);

/// FIFO link queue with an outflow-credit accumulator.
class QueueLink {
public:
    struct Slot {
        std::uint32_t agent;
        double earliest_exit;
    };

    QueueLink(const Link& link, double scale);

    /// Accrues credit for every step up to and including `t`, capped at the
    /// burst bound. Idempotent for repeated calls with the same `t`.
    void accrue_to(int t);
    bool has_credit() const { return credit_ >= 1.0; }
    void spend_credit() { credit_ -= 1.0; }
    double credit() const { return credit_; }
    double burst_bound() const { return burst_; }
    double gain_per_step() const { return gain_; }

    double storage() const { return storage_; }
    std::size_t occupancy() const { return queue_.size(); }
    bool has_space() const { return double(queue_.size()) + 1.0 <= storage_; }
    bool empty() const { return queue_.empty(); }

    void push(std::uint32_t agent, double earliest_exit) { queue_.push_back({agent, earliest_exit}); }
    const Slot& front() const { return queue_.front(); }
    void pop() { queue_.pop_front(); }
    const std::deque<Slot>& slots() const { return queue_; }

private:
    std::deque<Slot> queue_;
    double storage_;
    double gain_;
    double burst_;
    double credit_;
    int accrued_to_ = std::numeric_limits<int>::min();
};

struct StuckAgent {
    std::size_t person = 0;
    std::size_t leg = 0;
    std::string where;  // link id, "waiting:<link>", or "pt"/"teleport"
};

struct MobsimResult {
    EventStream events;
    std::vector<StuckAgent> stuck;
};

/// Fixed-step (1 s) queue simulation of every person's selected plan.
///
/// Each step runs three phases: link outflow in stable link-id order (FIFO
/// within a link; a head vehicle leaves when its free-flow exit time has
/// passed, the link holds at least one unit of outflow credit, and the next
/// link has storage left), then due agent actions (activity ends,
/// departures, teleport and transit arrivals), then insertion of departing
/// cars onto their first link as storage allows. Idle stretches are skipped;
/// the resulting stream equals the one produced by stepping every second.
class QueueSimulation {
public:
    /// Throws SimulationError for unrouted legs or broken routes, naming the
    /// person and leg index.
    QueueSimulation(const Network& net, const Population& pop, const TollScheme* toll,
                    const TransitSchedule* transit, MobsimConfig config);

    /// Advances one step at time `t`; `t` must increase by whole seconds.
    void advance_time_step(int t);
    /// Runs to the horizon and flushes vehicles still travelling as stuck.
    MobsimResult run();

    const QueueLink& link_state(LinkIndex l) const { return links_[l]; }
    const EventStream& events() const { return events_; }

private:
    enum class Phase : std::uint8_t { activity, waiting, driving, teleport, transit, done };

    struct Agent {
        std::size_t person = 0;
        const Plan* plan = nullptr;
        std::size_t act = 0;   // current or last activity
        std::size_t leg = 0;   // current leg while travelling
        std::size_t route_pos = 0;
        Phase phase = Phase::activity;
    };

    enum class Action : std::uint8_t { act_end, board, alight, arrive };

    struct Due {
        int time;
        std::uint64_t seq;
        std::uint32_t agent;
        Action action;
        bool operator>(const Due& o) const { return time != o.time ? time > o.time : seq > o.seq; }
    };

    void schedule(int time, std::uint32_t agent, Action action);
    void emit(int t, EventKind kind, const Agent& a, std::string_view link = {}, std::string_view mode = {},
              double amount = 0.0);
    void enter_link(int t, std::uint32_t agent, LinkIndex l);
    void start_activity(int t, std::uint32_t agent);
    void end_activity(int t, std::uint32_t agent);
    void move_links(int t);
    void drain_actions(int t);
    void insert_waiting(int t);
    Point activity_point(const Activity& a) const;
    bool idle() const { return active_.empty() && waiting_ranks_.empty(); }

    const Network& net_;
    const Population& pop_;
    const TollScheme* toll_;
    const TransitSchedule* transit_;
    MobsimConfig config_;

    std::vector<QueueLink> links_;
    std::vector<std::deque<std::uint32_t>> waiting_;  // per link
    std::set<std::uint32_t> active_;                  // id ranks of links holding vehicles
    std::set<std::uint32_t> waiting_ranks_;           // id ranks of links with departures queued
    std::vector<Agent> agents_;
    std::priority_queue<Due, std::vector<Due>, std::greater<>> due_;
    std::uint64_t seq_ = 0;
    ChargeHistory charges_;
    EventStream events_;
    int last_step_ = std::numeric_limits<int>::min();
};

/// Convenience wrapper: constructs a QueueSimulation and runs it.
MobsimResult run_mobsim(const Network& net, const Population& pop, const TollScheme* toll,
                        const TransitSchedule* transit, const MobsimConfig& config = {});

}  // namespace tollsim
