#include "tollsim/router.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace tollsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool car_link(const Network& net, LinkIndex l)
{
    return net.link(l).modes.contains(Mode::car);
}

/// Free-flow time from every node to `target` over car links.
std::vector<double> free_flow_to(const Network& net, NodeIndex target)
{
    std::vector<double> dist(net.node_count(), kInf);
    using Item = std::pair<double, NodeIndex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[target] = 0.0;
    pq.push({0.0, target});
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d > dist[v])
            continue;
        for (auto l : net.in_links(v)) {
            if (!car_link(net, l))
                continue;
            const NodeIndex u = net.from_node(l);
            const double nd = d + net.link(l).free_flow_time();
            if (nd < dist[u]) {
                dist[u] = nd;
                pq.push({nd, u});
            }
        }
    }
    return dist;
}

struct RateRange {
    double drop = 0.0;  // largest rate(s) - rate(s') over s <= s'
    double low = 0.0;   // smallest rate
};

RateRange rate_range(const TollScheme& scheme, Seconds from, Seconds to)
{
    std::vector<Seconds> times{from};
    const long first_day = static_cast<long>(std::floor(from / kSecondsPerDay)) - 1;
    const long last_day = static_cast<long>(std::floor(to / kSecondsPerDay)) + 1;
    for (const auto& p : scheme.periods())
        for (long d = first_day; d <= last_day; ++d) {
            const Seconds t = p.start + double(d) * kSecondsPerDay;
            if (t > from && t <= to)
                times.push_back(t);
        }
    std::sort(times.begin(), times.end());
    double high = -kInf;
    RateRange out{0.0, kInf};
    for (auto t : times) {
        const double r = scheme.rate_at(t);
        high = std::max(high, r);
        out.drop = std::max(out.drop, high - r);
        out.low = std::min(out.low, r);
    }
    return out;
}

struct Label {
    NodeIndex node;
    Seconds tau;
    double toll;  // dollars
    double f;     // cost plus lower bound to the goal
    std::uint32_t parent;
    LinkIndex link;
    bool alive = true;
};

constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

}  // namespace

CarRouter::CarRouter(const Network& net, const TravelTimeField& ttf, const TollScheme* toll,
                     const ScoringParams& params)
    : net_(net), ttf_(ttf), toll_(toll), seconds_per_dollar_(params.seconds_per_dollar(Mode::car))
{
}

RouteCost CarRouter::evaluate(const CarRoute& route, Seconds departure, bool toll_exempt) const
{
    const TollScheme* scheme = toll_exempt ? nullptr : toll_;
    if (scheme && !scheme->charged_modes().contains(Mode::car))
        scheme = nullptr;
    RouteCost out;
    Seconds tau = departure;
    for (auto l : route.links) {
        if (scheme && scheme->charges_link(l))
            out.tolls += scheme->rate_at(tau);
        tau = ttf_.exit_time(l, tau);
    }
    out.arrival = tau;
    out.generalized = (tau - departure) + out.tolls * seconds_per_dollar_;
    return out;
}

CarRoute CarRouter::route(LinkIndex origin, LinkIndex dest, Seconds departure, bool toll_exempt) const
{
    if (origin == dest)
        return {};
    const TollScheme* scheme = toll_exempt ? nullptr : toll_;
    if (scheme && (!scheme->charged_modes().contains(Mode::car) || scheme->max_rate() <= 0.0))
        scheme = nullptr;
    auto toll_at = [&](LinkIndex l, Seconds t) {
        return scheme && scheme->charges_link(l) ? scheme->rate_at(t) : 0.0;
    };
    auto unreachable = [&] {
        return RoutingError("no car route from link '" + net_.link(origin).id + "' to link '" + net_.link(dest).id +
                            "'");
    };

    const NodeIndex start = net_.to_node(origin);
    const NodeIndex goal = net_.from_node(dest);
    if (!car_link(net_, dest))
        throw unreachable();
    const std::vector<double> h0 = free_flow_to(net_, goal);
    if (h0[start] == kInf)
        throw unreachable();
    const double h_dest = net_.link(dest).free_flow_time();

    // Upper bound: one label per node, time-dependent Dijkstra on generalized cost.
    CarRoute incumbent;
    {
        std::vector<double> best(net_.node_count(), kInf);
        std::vector<Seconds> tau(net_.node_count(), kInf);
        std::vector<double> toll(net_.node_count(), 0.0);
        std::vector<LinkIndex> via(net_.node_count(), std::numeric_limits<LinkIndex>::max());
        using Item = std::pair<double, NodeIndex>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        best[start] = 0.0;
        tau[start] = departure;
        pq.push({0.0, start});
        std::vector<bool> done(net_.node_count(), false);
        while (!pq.empty()) {
            auto [c, v] = pq.top();
            pq.pop();
            if (done[v])
                continue;
            done[v] = true;
            if (v == goal)
                break;
            for (auto l : net_.out_links(v)) {
                if (!car_link(net_, l))
                    continue;
                const NodeIndex w = net_.to_node(l);
                if (done[w])
                    continue;
                const double t_toll = toll[v] + toll_at(l, tau[v]);
                const Seconds t_tau = ttf_.exit_time(l, tau[v]);
                const double nc = (t_tau - departure) + t_toll * seconds_per_dollar_;
                if (nc < best[w]) {
                    best[w] = nc;
                    tau[w] = t_tau;
                    toll[w] = t_toll;
                    via[w] = l;
                    pq.push({nc, w});
                }
            }
        }
        if (!done[goal])
            throw unreachable();
        for (NodeIndex v = goal; v != start; v = net_.from_node(via[v]))
            incumbent.links.push_back(via[v]);
        std::reverse(incumbent.links.begin(), incumbent.links.end());
        incumbent.links.push_back(dest);
    }
    const double upper = evaluate(incumbent, departure, toll_exempt || !scheme).generalized;
    const double eps = 1e-9 * (1.0 + std::abs(upper));

    // A label that arrives earlier may still lose to a later one if tolls
    // drop in between: every chargeable link the later label still enters
    // can be up to `drop` cheaper for it. Completions costing more than the
    // bound are irrelevant, which caps how many such links remain.
    RateRange rates;
    if (scheme)
        rates = rate_range(*scheme, departure, departure + upper + 1.0);
    // The drop-aware search can blow up on large networks; past this many
    // labels it restarts without the drop allowance.
    const std::size_t label_cap = 64 * net_.node_count() + 4096;
    bool drop_aware = true;
    auto slack = [&](const Label& b) {
        if (!drop_aware || rates.drop <= 0.0)
            return 0.0;
        double links = double(scheme->chargeable_link_count());
        if (rates.low > 0.0)
            links = std::min(links, std::floor((upper + eps - b.f) / (rates.low * seconds_per_dollar_)) + 1.0);
        return rates.drop * std::max(links, 0.0);
    };

    std::vector<Label> labels;
    std::vector<std::vector<std::uint32_t>> at_node(net_.node_count());
    struct Item {
        double f;
        std::uint64_t seq;
        std::uint32_t label;
        bool goal;
        Seconds tau;
        double toll;
        bool operator>(const Item& o) const { return f != o.f ? f > o.f : seq > o.seq; }
    };
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    std::uint64_t seq = 0;

    auto cost_of = [&](Seconds tau, double toll) { return (tau - departure) + toll * seconds_per_dollar_; };
    auto path_ranks = [&](std::uint32_t idx) {
        std::vector<std::uint32_t> ranks;
        for (; idx != kNoParent && labels[idx].parent != kNoParent; idx = labels[idx].parent)
            ranks.push_back(net_.id_rank(labels[idx].link));
        std::reverse(ranks.begin(), ranks.end());
        return ranks;
    };
    auto on_path = [&](std::uint32_t idx, NodeIndex v) {
        for (; idx != kNoParent; idx = labels[idx].parent)
            if (labels[idx].node == v)
                return true;
        return false;
    };
    // true when label a may prune label b
    auto dominates = [&](const Label& a, const Label& b, std::uint32_t ia, std::uint32_t ib) {
        if (a.tau > b.tau || a.toll + slack(b) > b.toll)
            return false;
        if (a.tau == b.tau && a.toll == b.toll)
            return path_ranks(ia) <= path_ranks(ib);
        return true;
    };

    auto add_label = [&](Label cand) {
        cand.f = cost_of(cand.tau, cand.toll) + (cand.node == goal ? h_dest : h0[cand.node] + h_dest);
        if (cand.f > upper + eps)
            return;
        const double f = cand.f;
        const auto idx = static_cast<std::uint32_t>(labels.size());
        labels.push_back(cand);
        auto& set = at_node[cand.node];
        for (auto other : set)
            if (labels[other].alive && dominates(labels[other], labels[idx], other, idx)) {
                labels.pop_back();
                return;
            }
        std::erase_if(set, [&](std::uint32_t other) {
            if (labels[other].alive && dominates(labels[idx], labels[other], idx, other))
                labels[other].alive = false;
            return !labels[other].alive;
        });
        set.push_back(idx);
        pq.push({f, seq++, idx, false, 0.0, 0.0});
    };

    double best = kInf;
    std::vector<std::uint32_t> winners;
    auto restart = [&] {
        labels.clear();
        for (auto& set : at_node)
            set.clear();
        pq = {};
        best = kInf;
        winners.clear();
        add_label({start, departure, 0.0, 0.0, kNoParent, 0, true});
    };
    restart();
    while (!pq.empty()) {
        if (drop_aware && rates.drop > 0.0 && labels.size() > label_cap) {
            drop_aware = false;
            restart();
            continue;
        }
        const Item item = pq.top();
        if (item.f > best + eps)
            break;
        pq.pop();
        if (item.goal) {
            const double c = cost_of(item.tau, item.toll);
            if (best == kInf)
                best = c;
            if (c <= best + eps)
                winners.push_back(item.label);
            continue;
        }
        const Label cur = labels[item.label];
        if (!cur.alive)
            continue;
        if (cur.node == goal) {
            const Seconds tau = ttf_.exit_time(dest, cur.tau);
            const double toll = cur.toll + toll_at(dest, cur.tau);
            pq.push({cost_of(tau, toll), seq++, item.label, true, tau, toll});
            continue;
        }
        for (auto l : net_.out_links(cur.node)) {
            if (!car_link(net_, l))
                continue;
            const NodeIndex w = net_.to_node(l);
            if (h0[w] == kInf || on_path(item.label, w))
                continue;
            add_label({w, ttf_.exit_time(l, cur.tau), cur.toll + toll_at(l, cur.tau), 0.0, item.label, l, true});
        }
    }

    if (winners.empty())
        return incumbent;  // the label search never beats the bound within rounding
    auto pick = winners.front();
    auto pick_ranks = path_ranks(pick);
    for (std::size_t i = 1; i < winners.size(); ++i) {
        auto r = path_ranks(winners[i]);
        if (r < pick_ranks) {
            pick = winners[i];
            pick_ranks = std::move(r);
        }
    }
    CarRoute out;
    for (auto idx = pick; labels[idx].parent != kNoParent; idx = labels[idx].parent)
        out.links.push_back(labels[idx].link);
    std::reverse(out.links.begin(), out.links.end());
    out.links.push_back(dest);
    return out;
}

}  // namespace tollsim
