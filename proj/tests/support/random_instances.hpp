#pragma once

#include "oracles.hpp"

#include "tollsim/router.hpp"
#include "tollsim/tolling.hpp"

#include <memory>
#include <optional>
#include <random>
#include <string>

namespace testkit {

using namespace tollsim;

/// One routing query on a small random network with congestion and a toll.
struct RouterInstance {
    std::unique_ptr<Network> net;
    std::unique_ptr<TravelTimeField> ttf;
    std::optional<TollScheme> toll;
    std::vector<oracle::Period> periods;  // the same schedule, in the oracle's terms
    LinkIndex origin = 0;
    LinkIndex dest = 0;
    Seconds departure = 0.0;
    bool exempt = false;
};

inline RouterInstance random_router_instance(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    auto pick = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };

    RouterInstance out;
    while (true) {
        const int n = pick(2, 10);
        const double density = uni(0.2, 0.6);
        std::vector<Node> nodes;
        for (int i = 0; i < n; ++i)
            nodes.push_back({"v" + std::to_string(i), uni(0, 5000), uni(0, 5000)});
        std::vector<Link> links;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (a != b && uni(0, 1) < density)
                    links.push_back({"e" + std::to_string(a) + "_" + std::to_string(b), nodes[a].id, nodes[b].id,
                                     std::round(uni(100, 3000)), 1800.0, uni(5, 20), 1, {Mode::car}});
        if (links.size() < 2)
            continue;
        out.net = std::make_unique<Network>(nodes, links);
        break;
    }
    const auto& net = *out.net;

    // Congestion: random slow traversals in random bins.
    EventStream ev;
    const int traversals = pick(0, 60);
    for (int i = 0; i < traversals; ++i) {
        const auto l = LinkIndex(pick(0, int(net.link_count()) - 1));
        const int enter = pick(0, 26 * 3600);
        const int dur = int(std::ceil(net.link(l).free_flow_time() * uni(1.0, 6.0)));
        ev.push_back({enter, EventKind::link_enter, "x" + std::to_string(i), net.link(l).id, "", 0});
        ev.push_back({enter + dur, EventKind::link_leave, "x" + std::to_string(i), net.link(l).id, "", 0});
    }
    out.ttf = std::make_unique<TravelTimeField>(TravelTimeField::from_events(ev, net));

    // Toll: base plan or a random three-period day over a random cordon or link set.
    std::vector<TollPeriod> periods = nyc_cbd_base_periods();
    if (pick(0, 2) == 0) {
        const double a = pick(6, 14) * 3600.0;
        const double b = a + pick(1, 8) * 3600.0;
        const double c = b < 22 * 3600.0 ? 22 * 3600.0 : b + 1800.0;
        periods = {{a, b, double(pick(0, 20))}, {b, c, double(pick(0, 20))}, {c, a, double(pick(0, 20))}};
    }
    for (const auto& p : periods)
        out.periods.push_back({p.start / 3600.0, p.end / 3600.0, p.amount});

    if (pick(0, 3) > 0) {
        std::vector<std::string> inside;
        for (const auto& node : net.nodes())
            if (uni(0, 1) < 0.4)
                inside.push_back(node.id);
        if (inside.empty() || inside.size() == net.node_count()) {
            inside = {net.node(0).id};
            if (net.node_count() == 1)
                inside.clear();
        }
        if (!inside.empty())
            out.toll = TollScheme::cordon_scheme(build_cordon(net, inside), periods, true, TollDirection::both);
    } else {
        std::vector<LinkIndex> tolled;
        for (LinkIndex l = 0; l < net.link_count(); ++l)
            if (uni(0, 1) < 0.3)
                tolled.push_back(l);
        out.toll = TollScheme::link_scheme(net, tolled, periods);
    }

    out.origin = LinkIndex(pick(0, int(net.link_count()) - 1));
    out.dest = LinkIndex(pick(0, int(net.link_count()) - 1));
    // Departures cluster around rate changes half of the time.
    if (pick(0, 1) == 0) {
        const auto& p = periods[std::size_t(pick(0, int(periods.size()) - 1))];
        out.departure = std::round(p.end - uni(0, 5400));
    } else {
        out.departure = std::round(uni(0, 24 * 3600));
    }
    if (out.departure < 0)
        out.departure += 24 * 3600;
    out.exempt = pick(0, 9) == 0;
    return out;
}

inline std::vector<bool> chargeable_links(const RouterInstance& inst)
{
    std::vector<bool> out(inst.net->link_count(), false);
    if (inst.toll && !inst.exempt)
        for (LinkIndex l = 0; l < inst.net->link_count(); ++l)
            out[l] = inst.toll->charges_link(l);
    return out;
}

}  // namespace testkit
