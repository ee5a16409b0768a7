#include "builders.hpp"

#include "tollsim/travel_time.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace tollsim;
using testkit::link;

namespace {

Network single()
{
    // free-flow 100 s
    return Network({{"A", 0, 0}, {"B", 1000, 0}}, {link("L", "A", "B", 1000)});
}

void traverse(EventStream& ev, const std::string& person, int enter, int leave)
{
    ev.push_back({enter, EventKind::link_enter, person, "L", "", 0});
    ev.push_back({leave, EventKind::link_leave, person, "L", "", 0});
}

}  // namespace

TEST(TravelTime, NoTrafficIsFreeFlow)
{
    auto net = single();
    auto f = TravelTimeField::from_events({}, net);
    EXPECT_EQ(f.bin_count(), std::size_t(kHorizon / kTravelTimeBin));
    for (std::size_t b = 0; b < f.bin_count(); ++b)
        EXPECT_EQ(f.bin_value(0, b), 100.0);
    EXPECT_EQ(f.travel_time(0, 12345.6), 100.0);
}

TEST(TravelTime, SingleObservation)
{
    auto net = single();
    EventStream ev;
    traverse(ev, "a", 28800, 28800 + 130);
    auto f = TravelTimeField::from_events(ev, net);
    EXPECT_EQ(f.bin_value(0, 32), 130.0);
    EXPECT_EQ(f.bin_value(0, 31), 100.0);
}

TEST(TravelTime, MeanOfTraversalsInBin)
{
    auto net = single();
    EventStream ev;
    traverse(ev, "a", 28800, 28900);
    traverse(ev, "b", 28900, 29100);
    auto f = TravelTimeField::from_events(ev, net);
    EXPECT_EQ(f.bin_value(0, 32), 150.0);
}

TEST(TravelTime, InterpolatesBetweenBinMidpoints)
{
    auto net = single();
    EventStream ev;
    traverse(ev, "a", 28800, 29000);
    auto f = TravelTimeField::from_events(ev, net);
    const double mid32 = 32 * 900 + 450;
    EXPECT_NEAR(f.travel_time(0, mid32), 200.0, 1e-9);
    EXPECT_NEAR(f.travel_time(0, mid32 + 900), 100.0, 1e-9);
    EXPECT_NEAR(f.travel_time(0, mid32 + 450), 150.0, 1e-9);
    EXPECT_NEAR(f.travel_time(0, mid32 - 450), 150.0, 1e-9);
}

TEST(TravelTime, FifoAndNeverBelowFreeFlow)
{
    auto net = single();
    EventStream ev;
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> enter(6 * 3600, 20 * 3600);
    std::uniform_int_distribution<int> extra(0, 2000);
    for (int i = 0; i < 300; ++i) {
        int t = enter(rng);
        traverse(ev, "p" + std::to_string(i), t, t + 100 + extra(rng));
    }
    auto f = TravelTimeField::from_events(ev, net);
    double prev = -1.0;
    for (double t = 0.0; t < kHorizon; t += 7.3) {
        const double tt = f.travel_time(0, t);
        EXPECT_GE(tt, 100.0);
        const double out = f.exit_time(0, t);
        EXPECT_GE(out, prev);
        prev = out;
    }
}

TEST(TravelTime, UnpairedEventsAreIgnored)
{
    auto net = single();
    EventStream ev{{28800, EventKind::link_enter, "a", "L", "", 0}};
    auto f = TravelTimeField::from_events(ev, net);
    EXPECT_EQ(f.bin_value(0, 32), 100.0);
}
