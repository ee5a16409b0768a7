// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "oracles.hpp"
#include "random_instances.hpp"

#include "tollsim/analysis.hpp"
#include "tollsim/generate.hpp"
#include "tollsim/rundir.hpp"
#include "tollsim/scenario.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

using namespace tollsim;
namespace fs = std::filesystem;

namespace {

constexpr double H = 3600.0;

/// Collects failure notes for one criterion.
struct Check {
    std::vector<std::string> failures;
    std::string detail;

    void expect(bool ok, const std::string& what)
    {
        if (!ok && failures.size() < 10)
            failures.push_back(what);
        else if (!ok)
            failures.back() = "... and more";
    }
    bool ok() const { return failures.empty(); }
};

std::string fixed(double v, int digits = 4)
{
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << v;
    return out.str();
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name)
{
    auto dir = fs::temp_directory_path() / ("tollsim_acceptance_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

struct Run {
    LoadedScenario loaded;
    ScenarioConfig config;
    RunResult result;
};

Run run_config(ScenarioConfig config)
{
    auto loaded = load_scenario(config);
    RunOptions options;
    options.iterations = config.iterations;
    options.seed = config.seed;
    auto result = run_iterations(loaded.scenario, loaded.population, options);
    return {std::move(loaded), std::move(config), std::move(result)};
}

ScenarioConfig grid_config(const fs::path& dir, std::uint64_t seed)
{
    GridCityParams p;
    p.seed = seed;
    write_scenario(generate_grid_city(p), dir);
    return load_config(dir / "config.json");
}

// 1 ------------------------------------------------------------------------

Check conservation()
{
    Check c;
    double slowest = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto tag = "seed " + std::to_string(seed) + ": ";
        auto config = grid_config(scratch("conservation"), seed);
        c.expect(config.iterations == 50, tag + "expected 50 iterations");
        const auto start = std::chrono::steady_clock::now();
        auto run = run_config(config);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        slowest = std::max(slowest, secs);
        c.expect(secs < 120.0, tag + "run took " + fixed(secs, 1) + " s");
        const auto& sc = run.loaded.scenario;
        c.expect(sc.net.node_count() == 100, tag + "grid does not have 100 nodes");
        c.expect(run.result.population.persons.size() == 1000, tag + "population is not 1000");

        // Pairing over the final event stream.
        std::map<std::string, std::string> on_link;
        std::map<std::string, int> pending_start;  // persons between act_end and act_start
        for (const auto& e : run.result.final_events) {
            switch (e.kind) {
            case EventKind::link_enter:
                c.expect(!on_link.count(e.person), tag + e.person + " entered " + e.link + " twice");
                on_link[e.person] = e.link;
                break;
            case EventKind::link_leave: {
                auto it = on_link.find(e.person);
                c.expect(it != on_link.end() && it->second == e.link, tag + e.person + " left unentered " + e.link);
                if (it != on_link.end())
                    on_link.erase(it);
                break;
            }
            case EventKind::act_start:
                c.expect(pending_start[e.person] == 1, tag + e.person + " started an activity without ending one");
                pending_start[e.person] = 0;
                break;
            case EventKind::act_end:
                c.expect(pending_start[e.person] == 0, tag + e.person + " ended two activities in a row");
                pending_start[e.person] = 1;
                break;
            default:
                break;
            }
        }
        c.expect(on_link.empty(), tag + std::to_string(on_link.size()) + " link entries without a leave");
        for (const auto& [who, open] : pending_start)
            c.expect(open == 0, tag + who + " never reached the next activity");
        c.expect(run.result.final_stuck.empty(), tag + std::to_string(run.result.final_stuck.size()) + " stuck");

        // Re-execute the final plans one step at a time, checking storage after each step.
        QueueSimulation sim(sc.net, run.result.population, sc.toll ? &*sc.toll : nullptr, &sc.transit, sc.mobsim);
        std::size_t violations = 0;
        for (int t = 0; t < sc.mobsim.horizon; ++t) {
            sim.advance_time_step(t);
            for (LinkIndex l = 0; l < sc.net.link_count(); ++l)
                violations += double(sim.link_state(l).occupancy()) > sim.link_state(l).storage();
        }
        c.expect(violations == 0, tag + std::to_string(violations) + " link-steps over storage");
        c.expect(sim.events() == run.result.final_events, tag + "stepped replay differs from the final iteration");
    }
    c.detail = "slowest run " + fixed(slowest, 1) + " s";
    return c;
}

// 2 ------------------------------------------------------------------------

Check determinism()
{
    Check c;
    auto root = scratch("determinism");
    auto config = grid_config(root / "scenario", 3);
    config.iterations = 20;
    for (const char* name : {"a", "b"}) {
        auto cfg = config;
        cfg.output = root / name;
        auto run = run_config(cfg);
        write_run_dir(root / name, cfg, run.loaded.scenario, run.result);
    }
    for (const char* f : {"events.csv", "stats.csv"}) {
        const auto a = slurp(root / "a" / f);
        c.expect(!a.empty() && a == slurp(root / "b" / f), std::string(f) + " differs between identical runs");
    }
    c.detail = "grid-city, 20 iterations, seed 3";
    return c;
}

// 3 ------------------------------------------------------------------------

Check zero_toll()
{
    Check c;
    auto root = scratch("zero_toll");
    auto base = grid_config(root / "scenario", 2);
    base.iterations = 20;
    auto no_toll = base;
    apply_toll_overrides(no_toll, {std::nullopt, std::nullopt, true});
    no_toll.output = root / "none";
    auto zero = base;
    apply_toll_overrides(zero, {std::string(kNycCbdBasePreset), 0.0, false});
    zero.output = root / "zero";
    for (auto* cfg : {&no_toll, &zero}) {
        auto run = run_config(*cfg);
        write_run_dir(cfg->output, *cfg, run.loaded.scenario, run.result);
    }
    for (const char* f : {"events.csv", "stats.csv", "scores.csv", "population.json"})
        c.expect(slurp(root / "none" / f) == slurp(root / "zero" / f), std::string(f) + " differs");
    const auto events = slurp(root / "zero" / "events.csv");
    c.expect(events.find(",money,") == std::string::npos, "money events under a $0 toll");
    c.detail = "--no-toll vs nyc-cbd-base at $0, 20 iterations";
    return c;
}

// 4 and 5 ------------------------------------------------------------------

// Two nodes: o outside, i inside. "enter" crosses inward, "leave" outward.
Network crossing_net()
{
    return Network({{"o", 0, 0}, {"i", 1000, 0}},
                   {{"enter", "o", "i", 1000, 3600, 10, 1, {Mode::car}},
                    {"leave", "i", "o", 1000, 3600, 10, 1, {Mode::car}}});
}

Person commuter(const Network& net, const std::string& id, Seconds out_at, std::optional<Seconds> back_at)
{
    const auto enter = net.link_index("enter");
    const auto leave = net.link_index("leave");
    Plan plan;
    plan.activities.push_back({"home", leave, out_at, 12 * H});
    plan.legs.push_back({Mode::car, std::nullopt, CarRoute{{enter}}});
    if (back_at) {
        plan.activities.push_back({"work", enter, back_at, 8 * H});
        plan.legs.push_back({Mode::car, std::nullopt, CarRoute{{leave}}});
        plan.activities.push_back({"home", leave, std::nullopt, 12 * H});
    } else {
        plan.activities.push_back({"work", enter, std::nullopt, 8 * H});
    }
    Person p;
    p.id = id;
    p.plans.push_back(std::move(plan));
    return p;
}

std::map<std::string, std::vector<double>> charges(const EventStream& events)
{
    std::map<std::string, std::vector<double>> out;
    for (const auto& e : events)
        if (e.kind == EventKind::money)
            out[e.person].push_back(-e.amount);
    return out;
}

Check once_daily()
{
    Check c;
    const auto net = crossing_net();
    Population pop;
    for (int i = 0; i < 20; ++i)
        pop.persons.push_back(commuter(net, "p" + std::to_string(i), 7 * H + 30 * i, 18 * H + 30 * i));
    const std::vector<std::string> inside{"i"};
    for (bool once : {true, false}) {
        auto scheme = TollScheme::cordon_scheme(build_cordon(net, inside), nyc_cbd_base_periods(), once);
        auto r = run_mobsim(net, pop, &scheme, nullptr);
        c.expect(r.stuck.empty(), "stuck agents");
        auto paid = charges(r.events);
        const std::vector<double> expected = once ? std::vector<double>{9.0} : std::vector<double>{9.0, 9.0};
        for (const auto& p : pop.persons)
            c.expect(paid[p.id] == expected, p.id + (once ? " once_per_day" : " every crossing") + ": got " +
                                                 std::to_string(paid[p.id].size()) + " charges");
    }
    c.detail = "20 commuters in at 07:00, out at 18:00";
    return c;
}

Check rate_schedule()
{
    Check c;
    const auto net = crossing_net();
    const std::vector<std::pair<Seconds, double>> cases{{12 * H, 9.0}, {21 * H, 7.0}, {3 * H, 5.0}};
    Population pop;
    for (std::size_t i = 0; i < cases.size(); ++i)
        pop.persons.push_back(commuter(net, "p" + std::to_string(i), cases[i].first, std::nullopt));
    auto scheme = TollScheme::cordon_scheme(build_cordon(net, std::vector<std::string>{"i"}), nyc_cbd_base_periods());
    auto paid = charges(run_mobsim(net, pop, &scheme, nullptr).events);
    std::string got;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& v = paid["p" + std::to_string(i)];
        c.expect(v == std::vector<double>{cases[i].second},
                 "crossing at " + std::to_string(int(cases[i].first / H)) + ":00 not charged $" +
                     fixed(cases[i].second, 0));
        got += (i ? "/" : "") + (v.empty() ? std::string("none") : "$" + format_number(v[0]));
    }
    c.detail = "12:00/21:00/03:00 charged " + got;
    return c;
}

// 6 ------------------------------------------------------------------------

Check pigou()
{
    Check c;
    PigouParams params;
    auto g = generate_pigou(params);
    std::vector<double> departures;
    const auto origin_ff = g.net.link(g.net.link_index("origin")).free_flow_time();
    for (const auto& p : g.population.persons)
        departures.push_back(*p.plans[0].activities[0].end_time + origin_ff);
    const auto& a = g.net.link(g.net.link_index("A"));
    const auto& b = g.net.link(g.net.link_index("B"));
    const double expected = oracle::pigou_split(departures, a.free_flow_time(), b.free_flow_time(), b.capacity);

    double share_sum = 0.0;
    double worst_metric = 0.0;
    const int seeds = 5;
    for (int seed = 1; seed <= seeds; ++seed) {
        Scenario sc{g.net, {}, std::nullopt, std::nullopt, {}, strategy_config_from_json(g.config["strategy"]), {}};
        auto r = run_iterations(sc, g.population, {.iterations = g.config["iterations"].get<int>(), .seed = std::uint64_t(seed)});
        std::size_t on_b = 0;
        for (const auto& e : r.final_events)
            on_b += e.kind == EventKind::link_enter && e.link == "B";
        share_sum += double(on_b) / double(g.population.persons.size());
        worst_metric = std::max(worst_metric, r.convergence_metric);
        c.expect(r.convergence_metric < kConvergenceThreshold,
                 "seed " + std::to_string(seed) + " did not converge (metric " + fixed(r.convergence_metric) + ")");
    }
    const double share = share_sum / seeds;
    c.expect(std::abs(share - expected) <= 0.05,
             "share on B " + fixed(share, 3) + " vs oracle " + fixed(expected, 3));
    c.detail = "share on B " + fixed(share, 3) + ", oracle " + fixed(expected, 3) + ", worst metric " +
               fixed(worst_metric, 6);
    return c;
}

// 7 ------------------------------------------------------------------------

Check router_optimality()
{
    Check c;
    ScoringParams params;
    int solvable = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        auto inst = testkit::random_router_instance(seed);
        const auto charge = testkit::chargeable_links(inst);
        CarRouter router(*inst.net, *inst.ttf, inst.toll ? &*inst.toll : nullptr, params);
        auto best = oracle::best_simple_path(*inst.net, *inst.ttf, charge, inst.periods, params.seconds_per_dollar(),
                                             inst.origin, inst.dest, inst.departure);
        const auto tag = "graph " + std::to_string(seed) + ": ";
        if (!std::isfinite(best.generalized)) {
            bool threw = false;
            try {
                router.route(inst.origin, inst.dest, inst.departure, inst.exempt);
            } catch (const RoutingError&) {
                threw = true;
            }
            c.expect(threw, tag + "route found where none exists");
            continue;
        }
        ++solvable;
        try {
            auto route = router.route(inst.origin, inst.dest, inst.departure, inst.exempt);
            const double cost = oracle::path_cost(*inst.ttf, charge, inst.periods, params.seconds_per_dollar(),
                                                  route.links, inst.departure);
            c.expect(std::abs(cost - best.generalized) <= 1e-6 * (1.0 + best.generalized),
                     tag + "cost " + fixed(cost) + " vs minimum " + fixed(best.generalized));
        } catch (const std::exception& e) {
            c.expect(false, tag + e.what());
        }
    }
    c.detail = std::to_string(solvable) + " reachable of 200 graphs";
    return c;
}

// 8 ------------------------------------------------------------------------

Check toll_ladder()
{
    Check c;
    const std::vector<double> ladder{0.0, 5.0, 9.0, 15.0};
    const int seeds = 5;
    std::vector<double> entries(ladder.size(), 0.0);
    std::vector<double> boardings(ladder.size(), 0.0);
    for (int seed = 1; seed <= seeds; ++seed) {
        auto base = grid_config(scratch("ladder"), std::uint64_t(seed));
        for (std::size_t k = 0; k < ladder.size(); ++k) {
            auto cfg = base;
            apply_toll_overrides(cfg, {std::nullopt, ladder[k], false});
            auto run = run_config(cfg);
            const auto& sc = run.loaded.scenario;
            entries[k] += double(cordon_metrics(run.result.final_events, *sc.cordon, sc.net).total_entries()) / seeds;
            auto ride = pt_ridership(run.result.final_events);
            double boards = 0.0;
            for (auto b : ride.boardings)
                boards += double(b);
            boardings[k] += boards / seeds;
        }
    }
    std::string e_text;
    std::string b_text;
    for (std::size_t k = 0; k < ladder.size(); ++k) {
        e_text += (k ? " " : "") + fixed(entries[k], 1);
        b_text += (k ? " " : "") + fixed(boardings[k], 1);
        if (k == 0)
            continue;
        c.expect(entries[k] <= entries[k - 1] * 1.01,
                 "cordon entries rise from $" + format_number(ladder[k - 1]) + " to $" + format_number(ladder[k]));
        c.expect(boardings[k] >= boardings[k - 1],
                 "pt boardings fall from $" + format_number(ladder[k - 1]) + " to $" + format_number(ladder[k]));
    }
    c.detail = "entries " + e_text + "; boardings " + b_text;
    return c;
}

// 9 ------------------------------------------------------------------------

double hand_activity(double seconds, double typical_h, double beta_perf)
{
    const double t0_h = typical_h * std::exp(-10.0 / typical_h);
    return beta_perf * typical_h * std::log((seconds / 3600.0) / t0_h);
}

Check scoring_arithmetic()
{
    Check c;
    Network net({{"A", 0, 0}, {"B", 1000, 0}, {"C", 2000, 0}},
                {{"h", "B", "A", 1000, 3600, 10, 1, {Mode::car}},
                 {"x", "A", "B", 1000, 3600, 10, 1, {Mode::car}},
                 {"w", "B", "C", 1500, 3600, 10, 1, {Mode::car}},
                 {"y", "C", "B", 1500, 3600, 10, 1, {Mode::car}}});
    const auto l = [&](const char* id) { return net.link_index(id); };
    Plan plan;
    plan.activities = {{"home", l("h"), 8 * H, 12 * H}, {"work", l("w"), 17 * H, 8 * H}, {"home", l("h"), {}, 12 * H}};
    plan.legs = {{Mode::car, std::nullopt, CarRoute{{l("x"), l("w")}}},
                 {Mode::car, std::nullopt, CarRoute{{l("y"), l("h")}}}};
    auto events = [](double toll) {
        EventStream ev{{28800, EventKind::act_end, "p", "h", "", 0},
                       {28800, EventKind::depart, "p", "h", "car", 0},
                       {28801, EventKind::link_enter, "p", "x", "", 0}};
        if (toll != 0.0)
            ev.push_back({28801, EventKind::money, "p", "x", "", -toll});
        for (Event e : std::initializer_list<Event>{{28950, EventKind::link_leave, "p", "x", "", 0},
                                                    {28950, EventKind::link_enter, "p", "w", "", 0},
                                                    {29100, EventKind::link_leave, "p", "w", "", 0},
                                                    {29100, EventKind::arrive, "p", "w", "car", 0},
                                                    {29100, EventKind::act_start, "p", "w", "", 0},
                                                    {61200, EventKind::act_end, "p", "w", "", 0},
                                                    {61200, EventKind::depart, "p", "w", "car", 0},
                                                    {61201, EventKind::link_enter, "p", "y", "", 0},
                                                    {61600, EventKind::link_leave, "p", "y", "", 0},
                                                    {61600, EventKind::link_enter, "p", "h", "", 0},
                                                    {61900, EventKind::link_leave, "p", "h", "", 0},
                                                    {61900, EventKind::arrive, "p", "h", "car", 0},
                                                    {61900, EventKind::act_start, "p", "h", "", 0}})
            ev.push_back(e);
        return ev;
    };

    ScoringParams p;
    p.monetary_rate = {0.1, 0, 0, 0};
    const double home = hand_activity(28800.0 + 86400.0 - 61900.0, 12.0, 6.0);
    const double work = hand_activity(61200.0 - 29100.0, 8.0, 6.0);
    const double leg1 = -1.0 - 6.0 * (300.0 / 3600.0) + 0.5 * (-0.1 * 2.5) + 0.5 * (-9.0);
    const double leg2 = -1.0 - 6.0 * (700.0 / 3600.0) + 0.5 * (-0.1 * 2.5);
    const double got = score_plan(plan, events(9.0), p, net).total;
    c.expect(std::abs(got - (home + work + leg1 + leg2)) <= 1e-9,
             "home-work-home: " + fixed(got, 9) + " vs " + fixed(home + work + leg1 + leg2, 9));

    // One open activity and no legs: a full day at home.
    Plan stay;
    stay.activities = {{"home", l("h"), {}, 12 * H}};
    const double alone = score_plan(stay, {}, p, net).total;
    c.expect(std::abs(alone - hand_activity(24 * H, 12.0, 6.0)) <= 1e-9, "stay-at-home plan");

    const double base = score_plan(plan, events(0.0), p, net).total;
    for (double toll : {5.0, 7.0, 9.0}) {
        const double slope = (score_plan(plan, events(toll), p, net).total - base) / toll;
        c.expect(std::abs(slope + p.beta_money) <= 1e-12, "slope at $" + format_number(toll) + " is " + fixed(slope, 12));
    }
    c.detail = "hand total " + fixed(home + work + leg1 + leg2, 6) + ", slope -beta_money at $5/$7/$9";
    return c;
}

// 10 -----------------------------------------------------------------------

Check logit()
{
    Check c;
    const int n = 10000;
    auto within = [&](const std::vector<int>& counts, const std::vector<double>& probs, const std::string& what) {
        for (std::size_t i = 0; i < probs.size(); ++i) {
            const double mean = n * probs[i];
            const double sigma = std::sqrt(n * probs[i] * (1.0 - probs[i]));
            c.expect(std::abs(counts[i] - mean) <= 3.0 * sigma + 1e-9,
                     what + ": option " + std::to_string(i) + " drawn " + std::to_string(counts[i]) + " times");
        }
    };
    auto draw = [&](const std::vector<double>& u, std::uint64_t seed) {
        Rng rng(seed);
        std::vector<int> counts(u.size(), 0);
        for (int i = 0; i < n; ++i)
            ++counts[choose_mode(u, 1.0, rng)];
        return counts;
    };

    const std::vector<double> symmetric{-2.0, -2.0, -2.0, -2.0};
    within(draw(symmetric, 7), std::vector<double>(4, 0.25), "symmetric");

    const std::vector<double> u{-1.0, -1.5, -3.0};
    const auto probs = logit_probabilities(u, 1.0);
    for (double shift : {-50.0, 7.0, 300.0}) {
        std::vector<double> shifted;
        for (double x : u)
            shifted.push_back(x + shift);
        const auto ps = logit_probabilities(shifted, 1.0);
        for (std::size_t i = 0; i < u.size(); ++i)
            c.expect(std::abs(ps[i] - probs[i]) <= 1e-12, "probabilities move under a shift of " + format_number(shift));
        within(draw(shifted, 11 + std::uint64_t(shift + 100)), probs, "shift " + format_number(shift));
    }
    c.detail = std::to_string(n) + " draws per check, 3 sigma";
    return c;
}

// 11 -----------------------------------------------------------------------

std::vector<std::string> header_of(const std::string& csv)
{
    std::vector<std::string> out;
    std::stringstream line(csv.substr(0, csv.find('\n')));
    std::string cell;
    while (std::getline(line, cell, ','))
        out.push_back(cell);
    return out;
}

Check analysis_fidelity()
{
    Check c;
    auto root = scratch("analysis");
    auto cfg = grid_config(root / "scenario", 4);
    cfg.iterations = 10;
    cfg.output = root / "run";
    auto run = run_config(cfg);
    write_run_dir(root / "run", cfg, run.loaded.scenario, run.result);
    compare_runs(root / "run", root / "run", root / "report", false);

    std::size_t cells = 0;
    for (const char* f : {"link_volume_deltas.csv", "cordon_deltas.csv"}) {
        std::ifstream in(root / "report" / f);
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            ++cells;
            c.expect(line.substr(line.rfind(',') + 1) == "0", std::string(f) + ": " + line);
        }
    }
    c.expect(cells > 0, "no delta rows written");

    const auto modes = slurp(root / "report" / "mode_share.csv");
    const std::vector<std::string> mode_cols{"Scenario", "FHV",  "Access walk", "Bike", "Car", "Pt", "Ride",
                                             "Taxi", "Transit walk", "Cb", "Egress walk", "Walk"};
    c.expect(header_of(modes) == mode_cols, "mode-share columns");
    const auto scores = slurp(root / "report" / "score_stats.csv");
    const std::vector<std::string> score_cols{"Scenario", "Mean", "Std", "Minimum", "Maximum", "Median"};
    c.expect(header_of(scores) == score_cols, "score-stat columns");
    c.expect(scores.find("Difference,0.00,0.00,0.00,0.00,0.00") != std::string::npos, "score difference row");
    c.detail = std::to_string(cells) + " delta rows, all zero";
    return c;
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
        {"conservation", conservation},
        {"determinism", determinism},
        {"zero-toll equivalence", zero_toll},
        {"once-daily charging", once_daily},
        {"rate schedule", rate_schedule},
        {"pigou equilibrium", pigou},
        {"router optimality", router_optimality},
        {"toll monotonicity", toll_ladder},
        {"scoring arithmetic", scoring_arithmetic},
        {"logit properties", logit},
        {"analysis fidelity", analysis_fidelity},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        try {
            c = criteria[i].second();
        } catch (const std::exception& e) {
            c.failures.push_back(std::string("exception: ") + e.what());
        }
        std::cout << (c.ok() ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first;
        if (!c.detail.empty())
            std::cout << " (" << c.detail << ")";
        std::cout << '\n';
        for (const auto& f : c.failures)
            std::cout << "      " << f << '\n';
        std::cout.flush();
        failed += !c.ok();
    }
    std::cout << (criteria.size() - std::size_t(failed)) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
