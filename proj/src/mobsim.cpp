#include "tollsim/mobsim.hpp"

#include <algorithm>
#include <cmath>

namespace tollsim {

double storage_capacity(const Link& link, double scale)
{
    return std::max(1.0, std::floor(link.length * link.lanes / kEffectiveVehicleLength) * scale);
}

double flow_per_step(const Link& link, double scale)
{
    return link.capacity * scale / kSecondsPerHour;
}

QueueLink::QueueLink(const Link& link, double scale)
    : storage_(storage_capacity(link, scale)),
      gain_(flow_per_step(link, scale)),
      burst_(std::max(1.0, gain_)),
      credit_(burst_)
{
}

void QueueLink::accrue_to(int t)
{
    if (accrued_to_ == std::numeric_limits<int>::min()) {
        credit_ = burst_;
    } else if (t > accrued_to_) {
        // one capped gain per elapsed step; the cap makes this equal to
        // min(burst, credit + n * gain) but keeps step-by-step rounding
        for (int s = accrued_to_; s < t && credit_ < burst_; ++s)
            credit_ = std::min(burst_, credit_ + gain_);
    }
    accrued_to_ = std::max(accrued_to_, t);
}

QueueSimulation::QueueSimulation(const Network& net, const Population& pop, const TollScheme* toll,
                                 const TransitSchedule* transit, MobsimConfig config)
    : net_(net), pop_(pop), toll_(toll), transit_(transit), config_(config)
{
    if (!(config_.scale > 0.0 && config_.scale <= 1.0))
        throw SimulationError("flow-scaling factor must lie in (0, 1]");
    links_.reserve(net.link_count());
    for (const auto& l : net.links())
        links_.emplace_back(l, config_.scale);
    waiting_.resize(net.link_count());

    agents_.reserve(pop.persons.size());
    for (std::size_t p = 0; p < pop.persons.size(); ++p) {
        const auto& person = pop.persons[p];
        const auto& plan = person.selected_plan();
        auto where = [&](std::size_t leg) {
            return "person '" + person.id + "' leg " + std::to_string(leg) + ": ";
        };
        if (auto err = check_plan(net, plan))
            throw SimulationError("person '" + person.id + "': " + *err);
        for (std::size_t i = 0; i < plan.legs.size(); ++i) {
            const auto& leg = plan.legs[i];
            if (!leg.routed())
                throw SimulationError(where(i) + "unrouted leg");
            if (const auto* pt = std::get_if<PtRoute>(&leg.route); pt && !pt->walk_only) {
                const TransitLine* line = transit ? transit->find_line(pt->line) : nullptr;
                if (!line)
                    throw SimulationError(where(i) + "unknown transit line '" + pt->line + "'");
                if (pt->board_stop >= pt->alight_stop || pt->alight_stop >= line->stops.size())
                    throw SimulationError(where(i) + "invalid stop pair on line '" + pt->line + "'");
            }
        }
        Agent a;
        a.person = p;
        a.plan = &plan;
        agents_.push_back(a);
        if (!plan.legs.empty())
            schedule(static_cast<int>(std::ceil(*plan.activities[0].end_time)), std::uint32_t(p), Action::act_end);
        else
            agents_.back().phase = Phase::done;
    }
}

void QueueSimulation::schedule(int time, std::uint32_t agent, Action action)
{
    due_.push({time, seq_++, agent, action});
}

void QueueSimulation::emit(int t, EventKind kind, const Agent& a, std::string_view link, std::string_view mode,
                           double amount)
{
    events_.push_back({t, kind, pop_.persons[a.person].id, std::string(link), std::string(mode), amount});
}

Point QueueSimulation::activity_point(const Activity& a) const
{
    const auto& n = net_.node(net_.to_node(a.link));
    return {n.x, n.y};
}

void QueueSimulation::enter_link(int t, std::uint32_t agent, LinkIndex l)
{
    auto& a = agents_[agent];
    const auto& link = net_.link(l);
    links_[l].push(agent, t + link.free_flow_time());
    active_.insert(net_.id_rank(l));
    emit(t, EventKind::link_enter, a, link.id);
    if (toll_) {
        const auto& person = pop_.persons[a.person];
        double charge = on_link_enter(*toll_, {a.person, person.toll_exempt, Mode::car}, l, t, charges_);
        if (charge > 0.0)
            emit(t, EventKind::money, a, link.id, {}, -charge);
    }
}

void QueueSimulation::start_activity(int t, std::uint32_t agent)
{
    auto& a = agents_[agent];
    a.act = a.leg + 1;
    emit(t, EventKind::act_start, a, net_.link(a.plan->activities[a.act].link).id);
    if (a.act + 1 == a.plan->activities.size()) {
        a.phase = Phase::done;
        return;
    }
    a.phase = Phase::activity;
    const Seconds planned = *a.plan->activities[a.act].end_time;
    schedule(std::max(t, static_cast<int>(std::ceil(planned))), agent, Action::act_end);
}

void QueueSimulation::end_activity(int t, std::uint32_t agent)
{
    auto& a = agents_[agent];
    const auto& from = a.plan->activities[a.act];
    const auto& to = a.plan->activities[a.act + 1];
    emit(t, EventKind::act_end, a, net_.link(from.link).id);
    a.leg = a.act;
    const auto& leg = a.plan->legs[a.leg];
    const auto mode = to_string(leg.mode);
    emit(t, EventKind::depart, a, net_.link(from.link).id, mode);

    switch (leg.mode) {
    case Mode::car: {
        const auto& route = std::get<CarRoute>(leg.route);
        if (route.links.empty()) {
            emit(t, EventKind::arrive, a, net_.link(to.link).id, mode);
            start_activity(t, agent);
            return;
        }
        a.phase = Phase::waiting;
        a.route_pos = 0;
        waiting_[route.links.front()].push_back(agent);
        waiting_ranks_.insert(net_.id_rank(route.links.front()));
        return;
    }
    case Mode::walk:
    case Mode::bike: {
        const double speed = leg.mode == Mode::walk ? kWalkSpeed : kBikeSpeed;
        const double dist = std::get<TeleportRoute>(leg.route).distance;
        a.phase = Phase::teleport;
        schedule(t + static_cast<int>(std::ceil(dist / speed)), agent, Action::arrive);
        return;
    }
    case Mode::pt: {
        const auto& route = std::get<PtRoute>(leg.route);
        const Point o = activity_point(from);
        const Point d = activity_point(to);
        a.phase = Phase::transit;
        if (route.walk_only) {
            schedule(t + static_cast<int>(std::ceil(distance(o, d) / kWalkSpeed)), agent, Action::arrive);
            return;
        }
        auto it = transit_->replay(o, d, route.line, route.board_stop, route.alight_stop, t);
        if (!it) {
            a.phase = Phase::done;  // stranded: no service left today
            return;
        }
        const int board = static_cast<int>(std::ceil(it->board_time));
        const int alight = std::max(board, static_cast<int>(std::ceil(it->alight_time)));
        const int arrive = std::max(alight, static_cast<int>(std::ceil(it->alight_time + it->egress_walk)));
        schedule(board, agent, Action::board);
        schedule(alight, agent, Action::alight);
        schedule(arrive, agent, Action::arrive);
        return;
    }
    }
}

void QueueSimulation::move_links(int t)
{
    std::vector<std::uint32_t> ranks(active_.begin(), active_.end());
    for (auto rank : ranks) {
        const LinkIndex l = net_.links_by_id()[rank];
        auto& q = links_[l];
        q.accrue_to(t);
        while (!q.empty()) {
            const auto head = q.front();
            if (head.earliest_exit > t || !q.has_credit())
                break;
            auto& a = agents_[head.agent];
            const auto& route = std::get<CarRoute>(a.plan->legs[a.leg].route).links;
            const bool last = a.route_pos + 1 == route.size();
            if (!last) {
                const LinkIndex next = route[a.route_pos + 1];
                if (!links_[next].has_space())
                    break;  // spillback
                q.pop();
                q.spend_credit();
                emit(t, EventKind::link_leave, a, net_.link(l).id);
                ++a.route_pos;
                a.phase = Phase::driving;
                enter_link(t, head.agent, next);
            } else {
                q.pop();
                q.spend_credit();
                emit(t, EventKind::link_leave, a, net_.link(l).id);
                emit(t, EventKind::arrive, a, net_.link(l).id, to_string(Mode::car));
                start_activity(t, head.agent);
            }
        }
        if (q.empty())
            active_.erase(rank);
    }
}

void QueueSimulation::drain_actions(int t)
{
    while (!due_.empty() && due_.top().time <= t) {
        const auto due = due_.top();
        due_.pop();
        auto& a = agents_[due.agent];
        switch (due.action) {
        case Action::act_end:
            end_activity(t, due.agent);
            break;
        case Action::board:
            emit(t, EventKind::board, a, {}, to_string(Mode::pt));
            break;
        case Action::alight:
            emit(t, EventKind::alight, a, {}, to_string(Mode::pt));
            break;
        case Action::arrive: {
            const auto mode = a.plan->legs[a.leg].mode;
            emit(t, EventKind::arrive, a, net_.link(a.plan->activities[a.leg + 1].link).id, to_string(mode));
            start_activity(t, due.agent);
            break;
        }
        }
    }
}

void QueueSimulation::insert_waiting(int t)
{
    std::vector<std::uint32_t> ranks(waiting_ranks_.begin(), waiting_ranks_.end());
    for (auto rank : ranks) {
        const LinkIndex l = net_.links_by_id()[rank];
        auto& w = waiting_[l];
        while (!w.empty() && links_[l].has_space()) {
            const auto agent = w.front();
            w.pop_front();
            agents_[agent].phase = Phase::driving;
            enter_link(t, agent, l);
        }
        if (w.empty())
            waiting_ranks_.erase(rank);
    }
}

void QueueSimulation::advance_time_step(int t)
{
    if (t <= last_step_)
        throw SimulationError("time steps must increase");
    last_step_ = t;
    move_links(t);
    drain_actions(t);
    insert_waiting(t);
}

MobsimResult QueueSimulation::run()
{
    int t = due_.empty() ? 0 : std::max(0, due_.top().time);
    if (last_step_ != std::numeric_limits<int>::min())
        t = std::max(t, last_step_ + 1);
    while (t <= config_.horizon) {
        advance_time_step(t);
        if (!idle())
            ++t;
        else if (!due_.empty())
            t = std::max(t + 1, due_.top().time);
        else
            break;
    }

    MobsimResult result;
    std::vector<bool> flagged(agents_.size(), false);
    auto flag = [&](std::uint32_t agent, std::string where) {
        if (flagged[agent])
            return;
        flagged[agent] = true;
        result.stuck.push_back({agents_[agent].person, agents_[agent].leg, std::move(where)});
    };
    for (auto l : net_.links_by_id()) {
        for (const auto& slot : links_[l].slots())
            flag(slot.agent, net_.link(l).id);
        for (auto agent : waiting_[l])
            flag(agent, "waiting:" + net_.link(l).id);
    }
    for (std::uint32_t i = 0; i < agents_.size(); ++i) {
        const auto& a = agents_[i];
        if (a.phase == Phase::teleport)
            flag(i, "teleport");
        else if (a.phase == Phase::transit || (a.phase == Phase::done && a.act + 1 < a.plan->activities.size()))
            flag(i, "pt");
    }
    std::sort(result.stuck.begin(), result.stuck.end(),
              [](const StuckAgent& x, const StuckAgent& y) { return x.person < y.person; });
    result.events = std::move(events_);
    return result;
}

MobsimResult run_mobsim(const Network& net, const Population& pop, const TollScheme* toll,
                        const TransitSchedule* transit, const MobsimConfig& config)
{
    QueueSimulation sim(net, pop, toll, transit, config);
    return sim.run();
}

}  // namespace tollsim
