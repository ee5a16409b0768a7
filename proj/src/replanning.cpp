#include "tollsim/replanning.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>
#include <unordered_map>

namespace tollsim {

using detail::json;

void StrategyConfig::validate() const
{
    const double weights[] = {w_select, w_reroute, w_mode_choice, w_time_mutation};
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0))
            throw ConfigError("strategy: weights must be non-negative");
        total += w;
    }
    if (!(total > 0.0))
            throw ConfigError("strategy: weights must not all be zero");
    if (!(mu_select > 0.0) || !(mu_mode > 0.0))
        throw ConfigError("strategy: logit temperatures must be positive");
    if (!(time_mutation_range >= 0.0))
        throw ConfigError("strategy: time_mutation_range must be non-negative");
    if (!(innovation_stop_fraction >= 0.0 && innovation_stop_fraction <= 1.0))
        throw ConfigError("strategy: innovation_stop_fraction must lie in [0, 1]");
    if (max_plans < 1)
        throw ConfigError("strategy: max_plans must be at least 1");
    if (modes.empty())
        throw ConfigError("strategy: mode-choice set is empty");
}

StrategyConfig strategy_config_from_json(const json& section)
{
    StrategyConfig c;
    if (section.is_null())
        return c;
    const std::string locus = "strategy";
    try {
        if (auto w = section.find("weights"); w != section.end()) {
            c.w_select = detail::optional_field<double>(*w, "select", c.w_select, locus + ".weights");
            c.w_reroute = detail::optional_field<double>(*w, "reroute", c.w_reroute, locus + ".weights");
            c.w_mode_choice = detail::optional_field<double>(*w, "mode_choice", c.w_mode_choice, locus + ".weights");
            c.w_time_mutation =
                detail::optional_field<double>(*w, "time_mutation", c.w_time_mutation, locus + ".weights");
        }
        c.mu_select = detail::optional_field<double>(section, "mu_select", c.mu_select, locus);
        c.mu_mode = detail::optional_field<double>(section, "mu_mode", c.mu_mode, locus);
        c.time_mutation_range =
            detail::optional_field<double>(section, "time_mutation_range", c.time_mutation_range, locus);
        c.innovation_stop_fraction =
            detail::optional_field<double>(section, "innovation_stop_fraction", c.innovation_stop_fraction, locus);
        c.max_plans = detail::optional_field<std::size_t>(section, "max_plans", c.max_plans, locus);
        if (auto m = section.find("modes"); m != section.end()) {
            c.modes = {};
            for (const auto& name : m->get<std::vector<std::string>>()) {
                auto mode = parse_mode(name);
                if (!mode)
                    throw ConfigError("strategy: unknown mode '" + name + "'");
                c.modes.insert(*mode);
            }
        }
    } catch (const ParseError& e) {
        throw ConfigError(e.what());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("strategy: ") + e.what());
    }
    c.validate();
    return c;
}

json strategy_config_to_json(const StrategyConfig& c)
{
    json modes = json::array();
    for (auto m : kAllModes)
        if (c.modes.contains(m))
            modes.push_back(std::string(to_string(m)));
    return {{"weights",
             {{"select", c.w_select},
              {"reroute", c.w_reroute},
              {"mode_choice", c.w_mode_choice},
              {"time_mutation", c.w_time_mutation}}},
            {"mu_select", c.mu_select},
            {"mu_mode", c.mu_mode},
            {"time_mutation_range", c.time_mutation_range},
            {"innovation_stop_fraction", c.innovation_stop_fraction},
            {"max_plans", c.max_plans},
            {"modes", modes}};
}

std::vector<double> logit_probabilities(std::span<const double> utilities, double mu)
{
    std::vector<double> p(utilities.size(), 0.0);
    double top = -std::numeric_limits<double>::infinity();
    for (double u : utilities)
        top = std::max(top, u);
    if (top == -std::numeric_limits<double>::infinity())
        return p;
    double total = 0.0;
    for (std::size_t i = 0; i < utilities.size(); ++i) {
        if (utilities[i] == -std::numeric_limits<double>::infinity())
            continue;
        p[i] = std::exp(mu * (utilities[i] - top));
        total += p[i];
    }
    for (auto& x : p)
        x /= total;
    return p;
}

std::size_t choose_mode(std::span<const double> utilities, double mu, Rng& rng)
{
    const auto p = logit_probabilities(utilities, mu);
    std::size_t last = p.size();
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0.0)
            last = i;
    if (last == p.size())
        throw Error("choose_mode: no available option");
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        if (p[i] > 0.0 && u < acc)
            return i;
    }
    return last;
}

void mutate_departure_time(Plan& plan, Seconds range, Rng& rng, Seconds horizon)
{
    if (!(range > 0.0) || plan.activities.size() < 2)
        return;
    std::vector<std::size_t> timed;
    for (std::size_t k = 0; k + 1 < plan.activities.size(); ++k)
        if (plan.activities[k].end_time)
            timed.push_back(k);
    if (timed.empty())
        return;
    const auto k = timed[std::uniform_int_distribution<std::size_t>(0, timed.size() - 1)(rng)];
    const double shift = std::uniform_real_distribution<double>(-range, range)(rng);

    Seconds lo = 0.0;
    for (std::size_t j = k; j-- > 0;)
        if (plan.activities[j].end_time) {
            lo = *plan.activities[j].end_time;
            break;
        }
    Seconds hi = horizon - 1.0;
    for (std::size_t j = k + 1; j + 1 < plan.activities.size(); ++j)
        if (plan.activities[j].end_time) {
            hi = *plan.activities[j].end_time;
            break;
        }
    auto& end = *plan.activities[k].end_time;
    end = std::clamp(std::round(end + shift), lo, std::max(lo, hi));
}

std::size_t select_plan(const Person& person, double mu, Rng& rng, bool best_only)
{
    const auto& plans = person.plans;
    if (plans.size() <= 1)
        return 0;
    for (std::size_t i = 0; i < plans.size(); ++i)
        if (!plans[i].score)
            return i;
    if (best_only) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < plans.size(); ++i)
            if (*plans[i].score > *plans[best].score)
                best = i;
        return best;
    }
    std::vector<double> scores;
    scores.reserve(plans.size());
    for (const auto& p : plans)
        scores.push_back(*p.score);
    return choose_mode(scores, mu, rng);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

Rng person_rng(std::uint64_t seed, std::string_view person_id, int iteration)
{
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ fnv1a(person_id));
    h = splitmix64(h ^ static_cast<std::uint64_t>(iteration));
    return Rng(h);
}

// --- plan routing and estimation ---------------------------------------------

PlanRouter::PlanRouter(const Scenario& scenario, const TravelTimeField& ttf)
    : scenario_(scenario),
      ttf_(ttf),
      router_(scenario.net, ttf, scenario.toll ? &*scenario.toll : nullptr, scenario.scoring)
{
}

Point PlanRouter::point_of(const Activity& a) const
{
    const auto& n = scenario_.net.node(scenario_.net.to_node(a.link));
    return {n.x, n.y};
}

namespace {

struct LegEstimate {
    Seconds arrival = 0.0;
    double utility = 0.0;
    bool available = true;
};

}  // namespace

bool PlanRouter::route_plan(Plan& plan, bool toll_exempt, bool only_unrouted) const
{
    Seconds t = 0.0;
    for (std::size_t k = 0; k < plan.legs.size(); ++k) {
        const auto& from = plan.activities[k];
        const auto& to = plan.activities[k + 1];
        if (from.end_time)
            t = std::max(t, *from.end_time);
        auto& leg = plan.legs[k];
        const Point o = point_of(from);
        const Point d = point_of(to);
        if (!(only_unrouted && leg.routed())) {
            switch (leg.mode) {
            case Mode::car:
                leg.route = router_.route(from.link, to.link, t, toll_exempt);
                break;
            case Mode::pt: {
                auto it = scenario_.transit.itinerary(o, d, t);
                if (!it)
                    return false;
                PtRoute r;
                r.walk_only = it->walk_only;
                if (!it->walk_only) {
                    r.line = it->line;
                    r.board_stop = it->board_stop;
                    r.alight_stop = it->alight_stop;
                }
                leg.route = r;
                break;
            }
            case Mode::walk:
            case Mode::bike:
                leg.route = TeleportRoute{distance(o, d)};
                break;
            }
        }
        // advance the clock along the (possibly pre-existing) route
        switch (leg.mode) {
        case Mode::car:
            t = router_.evaluate(std::get<CarRoute>(leg.route), t, toll_exempt).arrival;
            break;
        case Mode::pt: {
            const auto& r = std::get<PtRoute>(leg.route);
            if (r.walk_only) {
                t += std::ceil(distance(o, d) / kWalkSpeed);
            } else {
                auto it = scenario_.transit.replay(o, d, r.line, r.board_stop, r.alight_stop, t);
                if (!it)
                    return false;
                t += it->travel_time();
            }
            break;
        }
        case Mode::walk:
        case Mode::bike:
            t += std::ceil(std::get<TeleportRoute>(leg.route).distance / (leg.mode == Mode::walk ? kWalkSpeed : kBikeSpeed));
            break;
        }
    }
    return true;
}

double PlanRouter::estimate(const Plan& plan, bool toll_exempt) const
{
    const auto& params = scenario_.scoring;
    const TollScheme* scheme = scenario_.toll ? &*scenario_.toll : nullptr;
    ChargeHistory history;
    double total = 0.0;
    Seconds t = 0.0;
    for (std::size_t k = 0; k < plan.legs.size(); ++k) {
        const auto& from = plan.activities[k];
        const auto& to = plan.activities[k + 1];
        if (from.end_time)
            t = std::max(t, *from.end_time);
        const auto& leg = plan.legs[k];
        LegCost cost;
        cost.mode = leg.mode;
        const Point o = point_of(from);
        const Point d = point_of(to);
        if (const auto* car = std::get_if<CarRoute>(&leg.route)) {
            Seconds tau = t;
            for (auto l : car->links) {
                if (scheme)
                    cost.toll_paid += on_link_enter(*scheme, {0, toll_exempt, Mode::car}, l, tau, history);
                cost.distance += scenario_.net.link(l).length;
                tau = ttf_.exit_time(l, tau);
            }
            cost.travel_time = tau - t;
        } else if (const auto* pt = std::get_if<PtRoute>(&leg.route)) {
            if (pt->walk_only) {
                cost.travel_time = std::ceil(distance(o, d) / kWalkSpeed);
            } else {
                auto it = scenario_.transit.replay(o, d, pt->line, pt->board_stop, pt->alight_stop, t);
                if (!it)
                    return -std::numeric_limits<double>::infinity();
                cost.travel_time = it->travel_time();
                cost.pays_fare = true;
            }
        } else if (const auto* tp = std::get_if<TeleportRoute>(&leg.route)) {
            cost.distance = tp->distance;
            cost.travel_time = std::ceil(tp->distance / (leg.mode == Mode::walk ? kWalkSpeed : kBikeSpeed));
        } else {
            throw RoutingError("cannot estimate an unrouted leg");
        }
        total += leg_utility(cost, params);
        t += cost.travel_time;
    }
    return total;
}

std::optional<Plan> PlanRouter::with_mode(const Plan& plan, Mode mode, bool toll_exempt) const
{
    Plan copy = plan;
    copy.score.reset();
    for (auto& leg : copy.legs) {
        leg.mode = mode;
        leg.route = std::monostate{};
    }
    try {
        if (!route_plan(copy, toll_exempt))
            return std::nullopt;
    } catch (const RoutingError&) {
        return std::nullopt;
    }
    return copy;
}

// --- the loop ------------------------------------------------------------------

double convergence_metric(std::span<const double> means)
{
    if (means.size() < 2)
        return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    const std::size_t first = means.size() > kConvergenceWindow ? means.size() - kConvergenceWindow : 1;
    for (std::size_t i = first; i < means.size(); ++i)
        worst = std::max(worst, std::abs(means[i] - means[i - 1]) / (std::abs(means[i]) + 1.0));
    return worst;
}

bool is_converged(std::span<const double> means)
{
    return means.size() > kConvergenceWindow && convergence_metric(means) < kConvergenceThreshold;
}

namespace {

template <typename E>
[[noreturn]] void rethrow_prefixed(const E& e, const std::string& prefix)
{
    throw E(prefix + e.what());
}

[[noreturn]] void rethrow_with_iteration(int iteration)
{
    const std::string prefix = "iteration " + std::to_string(iteration) + ": ";
    try {
        throw;
    } catch (const RoutingError& e) {
        rethrow_prefixed(e, prefix);
    } catch (const SimulationError& e) {
        rethrow_prefixed(e, prefix);
    } catch (const ScoringError& e) {
        rethrow_prefixed(e, prefix);
    } catch (const ConfigError& e) {
        rethrow_prefixed(e, prefix);
    } catch (const ValidationError& e) {
        rethrow_prefixed(e, prefix);
    } catch (const Error& e) {
        rethrow_prefixed(e, prefix);
    }
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers; rethrows the
/// exception of the lowest failing index.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w * chunk; i < std::min(n, (w + 1) * chunk); ++i)
                    fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

enum class Strategy { select, reroute, mode_choice, time_mutation };

Strategy draw_strategy(const StrategyConfig& c, Rng& rng)
{
    const double total = c.w_select + c.w_reroute + c.w_mode_choice + c.w_time_mutation;
    double u = std::uniform_real_distribution<double>(0.0, total)(rng);
    if ((u -= c.w_select) < 0.0)
        return Strategy::select;
    if ((u -= c.w_reroute) < 0.0)
        return Strategy::reroute;
    if ((u -= c.w_mode_choice) < 0.0)
        return Strategy::mode_choice;
    return Strategy::time_mutation;
}

void replan_person(const Scenario& sc, const PlanRouter& router, Person& person, Rng& rng, bool innovate)
{
    const auto& cfg = sc.strategy;
    if (!innovate) {
        person.selected = select_plan(person, cfg.mu_select, rng, true);
        return;
    }
    switch (draw_strategy(cfg, rng)) {
    case Strategy::select:
        person.selected = select_plan(person, cfg.mu_select, rng, false);
        return;
    case Strategy::reroute: {
        Plan plan = person.selected_plan();
        plan.score.reset();
        if (!router.route_plan(plan, person.toll_exempt))
            return;  // pt no longer served at these times; keep the old plan
        add_plan(person, std::move(plan), cfg.max_plans);
        return;
    }
    case Strategy::mode_choice: {
        const Plan& base = person.selected_plan();
        std::vector<std::optional<Plan>> options;
        std::vector<double> utilities;
        for (auto m : kAllModes) {
            if (!cfg.modes.contains(m)) {
                options.emplace_back();
                utilities.push_back(-std::numeric_limits<double>::infinity());
                continue;
            }
            options.push_back(router.with_mode(base, m, person.toll_exempt));
            utilities.push_back(options.back() ? router.estimate(*options.back(), person.toll_exempt)
                                               : -std::numeric_limits<double>::infinity());
        }
        bool any = std::any_of(utilities.begin(), utilities.end(),
                               [](double u) { return u > -std::numeric_limits<double>::infinity(); });
        if (!any)
            return;
        auto pick = choose_mode(utilities, cfg.mu_mode, rng);
        add_plan(person, std::move(*options[pick]), cfg.max_plans);
        return;
    }
    case Strategy::time_mutation: {
        Plan plan = person.selected_plan();
        plan.score.reset();
        mutate_departure_time(plan, cfg.time_mutation_range, rng, sc.mobsim.horizon);
        add_plan(person, std::move(plan), cfg.max_plans);
        return;
    }
    }
}

}  // namespace

RunResult run_iterations(const Scenario& sc, Population population, const RunOptions& options)
{
    sc.strategy.validate();
    sc.scoring.validate();
    if (options.iterations < 1)
        throw ConfigError("iterations must be at least 1");
    const int n_iter = options.iterations;
    const int stop = static_cast<int>(std::floor(n_iter * sc.strategy.innovation_stop_fraction));
    const TollScheme* toll = sc.toll ? &*sc.toll : nullptr;

    std::unordered_map<std::string_view, std::uint32_t> index;
    for (std::uint32_t p = 0; p < population.persons.size(); ++p)
        index.emplace(population.persons[p].id, p);

    RunResult result;
    TravelTimeField ttf(sc.net, sc.mobsim.horizon);
    std::vector<double> means;
    ScoreOptions score_options;
    score_options.allow_incomplete = true;
    score_options.horizon = sc.mobsim.horizon;

    for (int it = 0; it < n_iter; ++it) {
        try {
            {
                PlanRouter router(sc, ttf);
                auto& persons = population.persons;
                if (it == 0) {
                    parallel_for(persons.size(), options.threads, [&](std::size_t p) {
                        auto& person = persons[p];
                        if (!router.route_plan(person.selected_plan(), person.toll_exempt, true))
                            throw RoutingError("person '" + person.id + "': no transit service for a pt leg");
                    });
                } else {
                    const bool innovate = it < stop;
                    parallel_for(persons.size(), options.threads, [&](std::size_t p) {
                        auto rng = person_rng(options.seed, persons[p].id, it);
                        replan_person(sc, router, persons[p], rng, innovate);
                    });
                }
            }

            MobsimResult sim = run_mobsim(sc.net, population, toll, &sc.transit, sc.mobsim);

            std::vector<EventStream> per_person(population.persons.size());
            for (const auto& e : sim.events) {
                auto found = index.find(e.person);
                if (found != index.end())
                    per_person[found->second].push_back(e);
            }

            IterationStats stats;
            stats.iteration = it;
            stats.stuck = sim.stuck.size();
            std::vector<double> scores;
            scores.reserve(population.persons.size());
            PerMode<std::size_t> legs{};
            std::size_t leg_total = 0;
            for (std::size_t p = 0; p < population.persons.size(); ++p) {
                auto& plan = population.persons[p].selected_plan();
                plan.score = score_plan(plan, per_person[p], sc.scoring, sc.net, score_options).total;
                scores.push_back(*plan.score);
                for (const auto& leg : plan.legs) {
                    ++at(legs, leg.mode);
                    ++leg_total;
                }
            }
            for (std::uint32_t p = 0; p < population.persons.size(); ++p) {
                const auto& person = population.persons[p];
                for (std::size_t i = 0; i < person.plans.size(); ++i)
                    result.scores.push_back({it, p, person.plans[i].score, i == person.selected});
            }

            double sum = 0.0;
            for (double s : scores)
                sum += s;
            stats.mean_score = scores.empty() ? 0.0 : sum / double(scores.size());
            double ss = 0.0;
            for (double s : scores)
                ss += (s - stats.mean_score) * (s - stats.mean_score);
            stats.std_score = scores.size() > 1 ? std::sqrt(ss / double(scores.size() - 1)) : 0.0;
            for (auto m : kAllModes)
                at(stats.mode_share, m) = leg_total ? double(at(legs, m)) / double(leg_total) : 0.0;
            for (const auto& e : sim.events) {
                if (e.kind == EventKind::board)
                    ++stats.pt_boardings;
                else if (e.kind == EventKind::link_enter && sc.cordon)
                    if (auto l = sc.net.find_link(e.link); l && sc.cordon->is_entry[*l])
                        ++stats.cordon_entries;
            }
            means.push_back(stats.mean_score);
            stats.convergence_metric = convergence_metric(means);
            result.stats.push_back(stats);
            if (options.on_iteration)
                options.on_iteration(stats);

            ttf = TravelTimeField::from_events(sim.events, sc.net, sc.mobsim.horizon);
            if (it + 1 == n_iter) {
                result.final_events = std::move(sim.events);
                result.final_stuck = std::move(sim.stuck);
            }
        } catch (const Error&) {
            rethrow_with_iteration(it);
        }
    }

    result.convergence_metric = convergence_metric(means);
    result.converged = is_converged(means);
    result.population = std::move(population);
    return result;
}

}  // namespace tollsim
