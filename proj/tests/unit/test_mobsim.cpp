#include "builders.hpp"

#include "tollsim/generate.hpp"
#include "tollsim/mobsim.hpp"
#include "tollsim/replanning.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace tollsim;
using testkit::act;
using testkit::car_leg;
using testkit::link;

namespace {

constexpr double H = 3600.0;

// h: O->A (home), L: A->B, M: B->C, back: C->O
Network corridor(double cap_l = 3600.0, double cap_m = 3600.0, double len_m = 1000.0)
{
    return Network({{"O", -1000, 0}, {"A", 0, 0}, {"B", 1000, 0}, {"C", 2000, 0}},
                   {link("h", "O", "A", 1000, 1e6), link("L", "A", "B", 1000, cap_l), link("M", "B", "C", len_m, cap_m),
                    link("back", "C", "O", 3000, 1e6)});
}

Person driver(const Network& net, std::string id, double leave, std::initializer_list<const char*> route,
              const char* dest)
{
    Plan plan;
    plan.activities = {act("home", net, "h", leave), act("work", net, dest)};
    plan.legs = {car_leg(net, route)};
    return testkit::person(std::move(id), std::move(plan));
}

std::vector<const Event*> of_kind(const EventStream& ev, EventKind k, const std::string& link = {})
{
    std::vector<const Event*> out;
    for (const auto& e : ev)
        if (e.kind == k && (link.empty() || e.link == link))
            out.push_back(&e);
    return out;
}

}  // namespace

TEST(Mobsim, StorageAndFlow)
{
    auto l = link("x", "A", "B", 75.0, 1800.0, 10.0, 2);
    EXPECT_EQ(storage_capacity(l, 1.0), 20.0);
    EXPECT_EQ(storage_capacity(l, 0.1), 2.0);
    EXPECT_EQ(storage_capacity(link("s", "A", "B", 5.0), 1.0), 1.0);
    EXPECT_EQ(flow_per_step(l, 1.0), 0.5);
    EXPECT_EQ(flow_per_step(l, 0.5), 0.25);
}

TEST(Mobsim, AccumulatorReleasesEveryOtherSecond)
{
    // Simulated saturation: a queue that always wants to leave.
    QueueLink q(link("x", "A", "B", 1000.0, 1800.0), 1.0);
    EXPECT_EQ(q.gain_per_step(), 0.5);
    EXPECT_EQ(q.burst_bound(), 1.0);
    std::vector<int> exits;
    for (int t = 0; t < 10; ++t) {
        q.accrue_to(t);
        if (q.has_credit()) {
            q.spend_credit();
            exits.push_back(t);
        }
    }
    EXPECT_EQ(exits, (std::vector<int>{0, 2, 4, 6, 8}));
    q.accrue_to(9);
    q.accrue_to(9);
    EXPECT_EQ(q.credit(), 0.5);  // spent at 8, half a unit gained at 9
}

TEST(Mobsim, FreeFlowTraversal)
{
    auto net = corridor();
    Population pop;
    pop.persons.push_back(driver(net, "p", 8 * H, {"L"}, "L"));
    auto r = run_mobsim(net, pop, nullptr, nullptr);
    EXPECT_TRUE(r.stuck.empty());
    auto enter = of_kind(r.events, EventKind::link_enter, "L");
    auto leave = of_kind(r.events, EventKind::link_leave, "L");
    ASSERT_EQ(enter.size(), 1u);
    ASSERT_EQ(leave.size(), 1u);
    EXPECT_EQ(enter[0]->time, 28800);
    EXPECT_EQ(leave[0]->time, 28800 + 100);  // 08:01:40
    ASSERT_EQ(of_kind(r.events, EventKind::arrive).size(), 1u);
    EXPECT_EQ(r.events.front().kind, EventKind::act_end);
    EXPECT_EQ(r.events.back().kind, EventKind::act_start);
}

TEST(Mobsim, OneVehiclePerSecondAt3600)
{
    auto net = corridor(3600.0);
    Population pop;
    pop.persons.push_back(driver(net, "a", 8 * H, {"L"}, "L"));
    pop.persons.push_back(driver(net, "b", 8 * H, {"L"}, "L"));
    auto r = run_mobsim(net, pop, nullptr, nullptr);
    auto leave = of_kind(r.events, EventKind::link_leave, "L");
    ASSERT_EQ(leave.size(), 2u);
    EXPECT_GE(leave[1]->time - leave[0]->time, 1);
    EXPECT_EQ(leave[0]->person, "a");
}

TEST(Mobsim, SaturatedOutflowAt1800)
{
    auto net = corridor(1800.0);
    Population pop;
    for (int i = 0; i < 10; ++i)
        pop.persons.push_back(driver(net, "p" + std::to_string(i), 8 * H, {"L"}, "L"));
    auto r = run_mobsim(net, pop, nullptr, nullptr);
    auto leave = of_kind(r.events, EventKind::link_leave, "L");
    ASSERT_EQ(leave.size(), 10u);
    for (std::size_t i = 1; i < leave.size(); ++i)
        EXPECT_EQ(leave[i]->time - leave[i - 1]->time, 2);
}

TEST(Mobsim, SpillbackHoldsVehicleUpstream)
{
    // M holds one vehicle (7.5 m) and releases one per hour after its initial credit:
    // a passes, b is held on M, c is held at the end of L.
    auto net = corridor(3600.0, 1.0, 7.5);
    Population pop;
    for (const char* id : {"a", "b", "c"})
        pop.persons.push_back(driver(net, id, 8 * H, {"L", "M", "back"}, "back"));
    QueueSimulation sim(net, pop, nullptr, nullptr, {});
    const auto m = net.link_index("M");
    const auto l = net.link_index("L");
    for (int t = 28800; t <= 28800 + 200; ++t) {
        sim.advance_time_step(t);
        EXPECT_LE(double(sim.link_state(m).occupancy()), sim.link_state(m).storage());
    }
    EXPECT_EQ(sim.link_state(m).occupancy(), 1u);
    EXPECT_EQ(sim.link_state(l).occupancy(), 1u);
}

TEST(Mobsim, SteppingEverySecondMatchesRun)
{
    auto g = generate_two_route_cordon({.agents = 60, .seed = 3});
    Scenario sc{g.net, {}, std::nullopt, std::nullopt, {}, {}, {}};
    auto pop = g.population;
    TravelTimeField ttf(sc.net);
    PlanRouter router(sc, ttf);
    for (auto& p : pop.persons)
        ASSERT_TRUE(router.route_plan(p.selected_plan(), false));
    auto reference = run_mobsim(sc.net, pop, nullptr, nullptr);
    QueueSimulation sim(sc.net, pop, nullptr, nullptr, {});
    for (int t = 0; t <= kHorizon; ++t)
        sim.advance_time_step(t);
    EXPECT_EQ(sim.events(), reference.events);
    EXPECT_THROW(sim.advance_time_step(5), SimulationError);
}

TEST(Mobsim, TeleportLegs)
{
    auto net = corridor();
    Plan plan;
    plan.activities = {act("home", net, "h", 8 * H), act("work", net, "M")};
    // h ends at A (0,0); M ends at C (2000,0)
    plan.legs = {{Mode::walk, std::nullopt, TeleportRoute{2000.0}}};
    Population pop;
    pop.persons.push_back(testkit::person("w", plan));
    plan.legs[0].mode = Mode::bike;
    pop.persons.push_back(testkit::person("b", plan));
    auto r = run_mobsim(net, pop, nullptr, nullptr);
    auto arrivals = of_kind(r.events, EventKind::arrive);
    ASSERT_EQ(arrivals.size(), 2u);
    std::map<std::string, int> at;
    for (auto* e : arrivals)
        at[e->person] = e->time;
    EXPECT_EQ(at["w"], 28800 + int(std::ceil(2000.0 / 1.34)));
    EXPECT_EQ(at["b"], 28800 + int(std::ceil(2000.0 / 4.17)));
    EXPECT_TRUE(of_kind(r.events, EventKind::link_enter).empty());
}

TEST(Mobsim, RejectsUnroutedLegs)
{
    auto net = corridor();
    Plan plan;
    plan.activities = {act("home", net, "h", 8 * H), act("work", net, "L")};
    plan.legs = {testkit::unrouted(Mode::car)};
    Population pop;
    pop.persons.push_back(testkit::person("u", plan));
    try {
        run_mobsim(net, pop, nullptr, nullptr);
        FAIL();
    } catch (const SimulationError& e) {
        EXPECT_NE(std::string(e.what()).find("'u'"), std::string::npos);
    }
}

TEST(Mobsim, StuckAgentsAreReported)
{
    // M releases one vehicle per hour; with a 1 h horizon most stay stuck.
    auto net = corridor(3600.0, 1.0, 1000.0);
    Population pop;
    for (int i = 0; i < 5; ++i)
        pop.persons.push_back(driver(net, "p" + std::to_string(i), 100, {"L", "M", "back"}, "back"));
    MobsimConfig cfg;
    cfg.horizon = 3600;
    auto r = run_mobsim(net, pop, nullptr, nullptr, cfg);
    EXPECT_FALSE(r.stuck.empty());
    for (const auto& s : r.stuck)
        EXPECT_FALSE(s.where.empty());
}

TEST(Mobsim, ZeroRateSchemeEqualsNoScheme)
{
    auto g = generate_two_route_cordon({.agents = 80, .seed = 5});
    Scenario sc{g.net, {}, std::nullopt, std::nullopt, {}, {}, {}};
    auto pop = g.population;
    TravelTimeField ttf(sc.net);
    PlanRouter router(sc, ttf);
    for (auto& p : pop.persons)
        router.route_plan(p.selected_plan(), false);
    auto scheme = TollScheme::cordon_scheme(build_cordon(sc.net, std::vector<std::string>{"C1", "C2"}),
                                            nyc_cbd_base_periods());
    auto priced = run_mobsim(sc.net, pop, &scheme, nullptr);
    EXPECT_FALSE(of_kind(priced.events, EventKind::money).empty());
    scheme.override_amounts(0.0);
    auto zero = run_mobsim(sc.net, pop, &scheme, nullptr);
    auto none = run_mobsim(sc.net, pop, nullptr, nullptr);
    EXPECT_EQ(zero.events, none.events);
}

TEST(Mobsim, MoneyEventFollowsLinkEnter)
{
    auto net = corridor();
    Population pop;
    pop.persons.push_back(driver(net, "p", 12 * H, {"L", "M"}, "M"));
    auto scheme = TollScheme::cordon_scheme(build_cordon(net, std::vector<std::string>{"B"}), nyc_cbd_base_periods());
    auto r = run_mobsim(net, pop, &scheme, nullptr);
    auto money = of_kind(r.events, EventKind::money);
    ASSERT_EQ(money.size(), 1u);
    EXPECT_EQ(money[0]->amount, -9.0);
    EXPECT_EQ(money[0]->link, "L");
    const Event* prev = money[0] - 1;
    EXPECT_EQ(prev->kind, EventKind::link_enter);
    EXPECT_EQ(prev->link, "L");
}

TEST(Mobsim, ConservationAndCausalityOnGrid)
{
    auto g = generate_grid_city({.agents = 400, .seed = 11});
    Scenario sc{g.net, TransitSchedule(g.lines, g.net), std::nullopt, std::nullopt, {}, {}, {}};
    auto pop = g.population;
    TravelTimeField ttf(sc.net);
    PlanRouter router(sc, ttf);
    for (auto& p : pop.persons)
        router.route_plan(p.selected_plan(), p.toll_exempt);
    auto r = run_mobsim(sc.net, pop, nullptr, &sc.transit);
    ASSERT_TRUE(r.stuck.empty());

    std::map<std::string, std::pair<std::string, int>> on;  // person -> (link, entry time)
    std::map<std::string, int> open_pt;
    for (const auto& e : r.events) {
        if (e.kind == EventKind::link_enter) {
            ASSERT_FALSE(on.count(e.person)) << e.person << " entered " << e.link << " without leaving";
            on[e.person] = {e.link, e.time};
        } else if (e.kind == EventKind::link_leave) {
            auto it = on.find(e.person);
            ASSERT_NE(it, on.end());
            ASSERT_EQ(it->second.first, e.link);
            const auto& l = sc.net.link(sc.net.link_index(e.link));
            EXPECT_GE(e.time - it->second.second, l.free_flow_time() - 1e-9);
            on.erase(it);
        } else if (e.kind == EventKind::board) {
            EXPECT_EQ(open_pt[e.person]++, 0);
        } else if (e.kind == EventKind::alight) {
            EXPECT_EQ(open_pt[e.person]--, 1);
        }
    }
    EXPECT_TRUE(on.empty());

    // Sliding one-hour windows of exits never exceed capacity plus the burst bound.
    std::map<std::string, std::vector<int>> exits;
    for (const auto& e : r.events)
        if (e.kind == EventKind::link_leave)
            exits[e.link].push_back(e.time);
    for (auto& [id, times] : exits) {
        const auto& l = sc.net.link(sc.net.link_index(id));
        const double bound = l.capacity + std::max(1.0, l.capacity / 3600.0);
        std::size_t lo = 0;
        for (std::size_t hi = 0; hi < times.size(); ++hi) {
            while (times[hi] - times[lo] >= 3600)
                ++lo;
            EXPECT_LE(double(hi - lo + 1), bound);
        }
    }
}
