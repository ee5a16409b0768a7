#include "tollsim/scoring.hpp"

#include "json_util.hpp"

#include <cmath>

namespace tollsim {

using detail::json;

void ScoringParams::validate() const
{
    if (!(beta_perf > 0.0))
        throw ConfigError("scoring: beta_perf must be positive");
    if (!(beta_money > 0.0))
        throw ConfigError("scoring: beta_money must be positive");
    for (auto m : kAllModes) {
        if (at(beta_trav, m) > 0.0)
            throw ConfigError("scoring: beta_trav for " + std::string(to_string(m)) + " must be <= 0");
        if (at(monetary_rate, m) < 0.0)
            throw ConfigError("scoring: monetary_rate for " + std::string(to_string(m)) + " must be >= 0");
    }
    for (const auto& [kind, t] : typical_duration)
        if (!(t > 0.0))
            throw ConfigError("scoring: typical_duration for '" + kind + "' must be positive");
}

double ScoringParams::seconds_per_dollar(Mode mode) const
{
    double per_hour = -at(beta_trav, mode);
    if (!(per_hour > 0.0))
        throw ConfigError("scoring: beta_trav for " + std::string(to_string(mode)) +
                          " must be negative to price money in time");
    return beta_money / per_hour * kSecondsPerHour;
}

namespace {

void read_per_mode(const json& section, const char* key, PerMode<double>& target)
{
    auto it = section.find(key);
    if (it == section.end())
        return;
    if (!it->is_object())
        throw ConfigError(std::string("scoring: '") + key + "' must map modes to numbers");
    for (const auto& [name, value] : it->items()) {
        auto m = parse_mode(name);
        if (!m)
            throw ConfigError(std::string("scoring: '") + key + "' has unknown mode '" + name + "'");
        at(target, *m) = value.get<double>();
    }
}

json per_mode_json(const PerMode<double>& values)
{
    json out = json::object();
    for (auto m : kAllModes)
        out[std::string(to_string(m))] = at(values, m);
    return out;
}

}  // namespace

ScoringParams scoring_params_from_json(const json& section)
{
    ScoringParams p;
    if (section.is_null())
        return p;
    const std::string locus = "scoring";
    try {
        p.beta_perf = detail::optional_field<double>(section, "beta_perf", p.beta_perf, locus);
        p.beta_money = detail::optional_field<double>(section, "beta_money", p.beta_money, locus);
        p.pt_fare = detail::optional_field<double>(section, "pt_fare", p.pt_fare, locus);
    } catch (const ParseError& e) {
        throw ConfigError(e.what());
    }
    read_per_mode(section, "beta_trav", p.beta_trav);
    read_per_mode(section, "mode_constant", p.mode_constant);
    read_per_mode(section, "monetary_rate", p.monetary_rate);
    if (auto it = section.find("typical_duration"); it != section.end())
        for (const auto& [kind, value] : it->items())
            p.typical_duration[kind] = value.get<double>();
    p.validate();
    return p;
}

json scoring_params_to_json(const ScoringParams& p)
{
    json td = json::object();
    for (const auto& [kind, t] : p.typical_duration)
        td[kind] = t;
    return {{"beta_perf", p.beta_perf},
            {"beta_trav", per_mode_json(p.beta_trav)},
            {"mode_constant", per_mode_json(p.mode_constant)},
            {"beta_money", p.beta_money},
            {"monetary_rate", per_mode_json(p.monetary_rate)},
            {"pt_fare", p.pt_fare},
            {"typical_duration", td}};
}

double activity_utility(Seconds duration, const std::string& kind, const ScoringParams& params)
{
    auto it = params.typical_duration.find(kind);
    if (it == params.typical_duration.end())
        throw ScoringError("no typical duration for activity kind '" + kind + "'");
    const double typical_h = it->second / kSecondsPerHour;
    const double zero_h = typical_h * std::exp(-10.0 / typical_h);
    const double duration_h = std::max(duration, 1.0) / kSecondsPerHour;
    return params.beta_perf * typical_h * std::log(duration_h / zero_h);
}

double leg_utility(const LegCost& leg, const ScoringParams& params)
{
    const double tau = -leg.toll_paid;
    const double fare = leg.pays_fare ? params.pt_fare : 0.0;
    return at(params.mode_constant, leg.mode) + at(params.beta_trav, leg.mode) * leg.travel_time / kSecondsPerHour +
           params.beta_money * (-at(params.monetary_rate, leg.mode) * leg.distance / 1000.0 - fare) +
           params.beta_money * tau;
}

namespace {

struct ExecutedLeg {
    bool departed = false;
    bool arrived = false;
    Seconds depart = 0.0;
    Seconds arrive = 0.0;
    double toll = 0.0;
    double distance = 0.0;
    bool boarded = false;
};

}  // namespace

ScoredPlan score_plan(const Plan& plan, std::span<const Event> events, const ScoringParams& params,
                      const Network& net, const ScoreOptions& options)
{
    const std::size_t n_acts = plan.activities.size();
    const std::size_t n_legs = plan.legs.size();
    if (n_acts == 0 || n_legs + 1 != n_acts)
        throw ScoringError("plan does not alternate activities and legs");

    std::vector<std::optional<Seconds>> starts(n_acts);
    std::vector<std::optional<Seconds>> ends(n_acts);
    std::vector<ExecutedLeg> legs(n_legs);

    // Walk the stream: activity k -> (act_end) -> leg k -> (arrive, act_start) -> activity k+1
    std::size_t act = 0;
    bool in_leg = false;
    bool awaiting_start = false;
    auto mismatch = [&](const Event& e, const std::string& why) {
        return ScoringError("person '" + e.person + "' at " + format_clock(e.time) + ": " + why);
    };
    for (const auto& e : events) {
        switch (e.kind) {
        case EventKind::act_end:
            if (in_leg || awaiting_start || ends[act] || act + 1 >= n_acts)
                throw mismatch(e, "unexpected act_end");
            ends[act] = e.time;
            break;
        case EventKind::depart:
            if (in_leg || awaiting_start || !ends[act] || act >= n_legs || legs[act].departed)
                throw mismatch(e, "unexpected depart");
            legs[act].departed = true;
            legs[act].depart = e.time;
            in_leg = true;
            break;
        case EventKind::link_enter:
            if (!in_leg)
                throw mismatch(e, "link_enter outside a leg");
            if (auto l = net.find_link(e.link))
                legs[act].distance += net.link(*l).length;
            else
                throw mismatch(e, "unknown link '" + e.link + "'");
            break;
        case EventKind::link_leave:
        case EventKind::alight:
            if (!in_leg)
                throw mismatch(e, std::string(to_string(e.kind)) + " outside a leg");
            break;
        case EventKind::board:
            if (!in_leg)
                throw mismatch(e, "board outside a leg");
            legs[act].boarded = true;
            break;
        case EventKind::money:
            if (!in_leg)
                throw mismatch(e, "money event between legs");
            legs[act].toll += -e.amount;
            break;
        case EventKind::arrive:
            if (!in_leg)
                throw mismatch(e, "arrive without depart");
            legs[act].arrived = true;
            legs[act].arrive = e.time;
            in_leg = false;
            awaiting_start = true;
            break;
        case EventKind::act_start:
            if (!awaiting_start)
                throw mismatch(e, "act_start without arrival");
            awaiting_start = false;
            ++act;
            starts[act] = e.time;
            break;
        }
    }

    ScoredPlan out;
    const bool finished = act + 1 == n_acts && !in_leg && !awaiting_start;
    if (!finished) {
        if (!options.allow_incomplete)
            throw ScoringError("events end before the plan completes (missing arrive or act_start)");
        out.complete = false;
    }

    auto add = [&](ScoreItem::Element el, std::size_t index, double u) {
        out.breakdown.push_back({el, index, u});
        out.total += u;
    };
    const Seconds day = kSecondsPerDay;

    if (n_acts == 1) {
        add(ScoreItem::Element::activity, 0, activity_utility(day, plan.activities[0].kind, params));
        return out;
    }

    const bool wrap = out.complete && plan.activities.front().kind == plan.activities.back().kind;
    for (std::size_t k = 0; k < n_acts; ++k) {
        const auto& a = plan.activities[k];
        if (k == 0) {
            if (!ends[0]) {
                // never left: the whole horizon is spent at the first activity
                add(ScoreItem::Element::activity, 0, activity_utility(options.horizon, a.kind, params));
                continue;
            }
            Seconds d = *ends[0];
            if (wrap)
                d += day - *starts[n_acts - 1];
            add(ScoreItem::Element::activity, 0, activity_utility(std::max(d, 0.0), a.kind, params));
        } else if (!starts[k]) {
            // not reached
        } else if (k + 1 == n_acts) {
            if (!wrap)
                add(ScoreItem::Element::activity, k, activity_utility(std::max(day - *starts[k], 0.0), a.kind, params));
        } else {
            Seconds end = ends[k].value_or(options.horizon);
            add(ScoreItem::Element::activity, k, activity_utility(std::max(end - *starts[k], 0.0), a.kind, params));
        }
        if (k < n_legs && legs[k].departed) {
            const auto& x = legs[k];
            LegCost cost;
            cost.mode = plan.legs[k].mode;
            cost.travel_time = (x.arrived ? x.arrive : options.horizon) - x.depart;
            cost.distance = x.distance;
            if (const auto* tp = std::get_if<TeleportRoute>(&plan.legs[k].route))
                cost.distance = tp->distance;
            cost.toll_paid = x.toll;
            cost.pays_fare = x.boarded;
            add(ScoreItem::Element::leg, k, leg_utility(cost, params));
        }
    }
    return out;
}

}  // namespace tollsim
