#include "tollsim/generate.hpp"

#include "tollsim/tolling.hpp"

#include "json_util.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace tollsim {

namespace fs = std::filesystem;
using detail::json;

std::string grid_node_id(int r, int c)
{
    return fmt::format("n{}_{}", r, c);
}

std::vector<std::string> grid_cordon(int rows, int cols)
{
    std::vector<std::string> inside;
    const int r0 = std::max(0, rows / 2 - 2);
    const int c0 = std::max(0, cols / 2 - 2);
    for (int r = r0; r <= std::min(rows - 1, r0 + 3); ++r)
        for (int c = c0; c <= std::min(cols - 1, c0 + 3); ++c)
            inside.push_back(grid_node_id(r, c));
    return inside;
}

namespace {

Activity activity(std::string kind, LinkIndex link, std::optional<Seconds> end, Seconds typical)
{
    return {std::move(kind), link, end, typical};
}

Plan commute(LinkIndex home, LinkIndex work, Seconds leave_home, Seconds leave_work, Mode mode)
{
    Plan p;
    p.activities = {activity("home", home, leave_home, 12 * 3600.0), activity("work", work, leave_work, 8 * 3600.0),
                    activity("home", home, std::nullopt, 12 * 3600.0)};
    p.legs = {Leg{mode, std::nullopt, {}}, Leg{mode, std::nullopt, {}}};
    return p;
}

std::string person_id(int i, int n)
{
    const int width = std::max(1, static_cast<int>(std::to_string(std::max(n - 1, 0)).size()));
    return fmt::format("p{:0{}d}", i, width);
}

Point point_at(const Network& net, LinkIndex l)
{
    const auto& n = net.node(net.to_node(l));
    return {n.x, n.y};
}

json base_config()
{
    return {{"network", "network.json"}, {"population", "population.json"}};
}

}  // namespace

GeneratedScenario generate_grid_city(const GridCityParams& p)
{
    if (p.rows < 5 || p.cols < 5)
        throw ConfigError("grid-city: grid must be at least 5x5 so the central block has a boundary");
    if (p.agents < 1)
        throw ConfigError("grid-city: agents must be positive");
    if (!(p.spacing > 0.0 && p.capacity > 0.0 && p.free_speed > 0.0))
        throw ConfigError("grid-city: spacing, capacity and speed must be positive");
    if (!(p.cbd_work_share >= 0.0 && p.cbd_work_share <= 1.0) || !(p.exempt_share >= 0.0 && p.exempt_share <= 1.0))
        throw ConfigError("grid-city: shares must lie in [0, 1]");

    std::vector<Node> nodes;
    for (int r = 0; r < p.rows; ++r)
        for (int c = 0; c < p.cols; ++c)
            nodes.push_back({grid_node_id(r, c), c * p.spacing, r * p.spacing});
    std::vector<Link> links;
    auto connect = [&](int r1, int c1, int r2, int c2) {
        for (int dir = 0; dir < 2; ++dir) {
            auto a = dir ? grid_node_id(r2, c2) : grid_node_id(r1, c1);
            auto b = dir ? grid_node_id(r1, c1) : grid_node_id(r2, c2);
            links.push_back({a + "-" + b, a, b, p.spacing, p.capacity, p.free_speed, 1, {Mode::car}});
        }
    };
    for (int r = 0; r < p.rows; ++r)
        for (int c = 0; c < p.cols; ++c) {
            if (c + 1 < p.cols)
                connect(r, c, r, c + 1);
            if (r + 1 < p.rows)
                connect(r, c, r + 1, c);
        }
    GeneratedScenario out{Network(std::move(nodes), std::move(links)), {}, {}, {}};
    const Network& net = out.net;

    // Transit corridors: two outer rows/cols plus one through the centre block.
    auto corridors = [](int n) {
        std::set<int> s{2, n / 2 - 1, n - 3};
        return std::vector<int>(s.begin(), s.end());
    };
    const double hop = std::round(p.spacing / 10.0) + 20.0;
    auto add_line = [&](std::string id, std::vector<std::string> stops, Seconds headway) {
        TransitLine line;
        line.id = std::move(id);
        line.inter_stop_times.assign(stops.size() - 1, hop);
        line.stops = std::move(stops);
        line.first_departure = 5 * 3600.0;
        line.last_departure = 23 * 3600.0;
        line.headway = headway;
        out.lines.push_back(std::move(line));
    };
    for (int r : corridors(p.rows)) {
        std::vector<std::string> stops;
        for (int c = 0; c < p.cols; ++c)
            stops.push_back(grid_node_id(r, c));
        const Seconds headway = r == p.rows / 2 - 1 ? 300.0 : 600.0;
        add_line(fmt::format("row{}-east", r), stops, headway);
        std::reverse(stops.begin(), stops.end());
        add_line(fmt::format("row{}-west", r), stops, headway);
    }
    for (int c : corridors(p.cols)) {
        std::vector<std::string> stops;
        for (int r = 0; r < p.rows; ++r)
            stops.push_back(grid_node_id(r, c));
        const Seconds headway = c == p.cols / 2 - 1 ? 300.0 : 600.0;
        add_line(fmt::format("col{}-north", c), stops, headway);
        std::reverse(stops.begin(), stops.end());
        add_line(fmt::format("col{}-south", c), stops, headway);
    }
    const TransitSchedule schedule(out.lines, net);

    const auto region = grid_cordon(p.rows, p.cols);
    const Cordon cordon = build_cordon(net, region);
    std::vector<LinkIndex> all;
    std::vector<LinkIndex> cbd;
    for (auto l : net.links_by_id()) {
        all.push_back(l);
        if (cordon.contains(net.to_node(l)))
            cbd.push_back(l);
    }

    std::mt19937_64 rng(p.seed);
    auto pick = [&](const std::vector<LinkIndex>& from) {
        return from[std::uniform_int_distribution<std::size_t>(0, from.size() - 1)(rng)];
    };
    auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

    for (int i = 0; i < p.agents; ++i) {
        Person person;
        person.id = person_id(i, p.agents);
        const LinkIndex home = pick(all);
        LinkIndex work = home;
        const bool in_cbd = uniform(0.0, 1.0) < p.cbd_work_share;
        while (net.to_node(work) == net.to_node(home))
            work = pick(in_cbd ? cbd : all);
        const Seconds leave_home = std::round(uniform(7 * 3600.0, 9 * 3600.0));
        const Seconds leave_work = std::round(uniform(16 * 3600.0, 18.5 * 3600.0));
        const double u = uniform(0.0, 1.0);
        Mode mode = Mode::car;
        if (u < 0.60) {
            mode = Mode::car;
        } else if (u < 0.85) {
            const bool served = schedule.itinerary(point_at(net, home), point_at(net, work), leave_home) &&
                                schedule.itinerary(point_at(net, work), point_at(net, home), leave_work);
            mode = served ? Mode::pt : Mode::car;
        } else if (u < 0.95) {
            mode = Mode::bike;
        } else {
            mode = Mode::walk;
        }
        person.toll_exempt = uniform(0.0, 1.0) < p.exempt_share;
        person.plans.push_back(commute(home, work, leave_home, leave_work, mode));
        out.population.persons.push_back(std::move(person));
    }

    out.config = base_config();
    out.config["transit"] = "transit.json";
    out.config["iterations"] = 50;
    out.config["seed"] = p.seed;
    out.config["toll"] = {{"kind", "cordon"}, {"region", region}, {"preset", std::string(kNycCbdBasePreset)}};
    return out;
}

GeneratedScenario generate_pigou(const PigouParams& p)
{
    if (p.agents < 1)
        throw ConfigError("pigou: agents must be positive");
    if (!(p.last_departure >= p.first_departure) || p.first_departure < 0)
        throw ConfigError("pigou: departure window is invalid");
    if (!(p.capacity_b > 0.0))
        throw ConfigError("pigou: capacity_b must be positive");
    constexpr double kHuge = 1e6;
    std::vector<Node> nodes{{"home", 0, 0}, {"s", 100, 0}, {"t", 3100, 0}, {"work", 3200, 0}};
    std::vector<Link> links{
        {"origin", "home", "s", 100, kHuge, 10, 100, {Mode::car}},
        {"A", "s", "t", 6000, kHuge, 10, 100, {Mode::car}},
        {"B", "s", "t", 3000, p.capacity_b, 10, 1, {Mode::car}},
        {"dest", "t", "work", 100, kHuge, 10, 100, {Mode::car}},
        {"return", "work", "home", 3200, kHuge, 10, 100, {Mode::car}},
    };
    GeneratedScenario out{Network(std::move(nodes), std::move(links)), {}, {}, {}};
    const LinkIndex home = out.net.link_index("return");
    const LinkIndex work = out.net.link_index("dest");
    const double window = p.last_departure - p.first_departure;
    for (int i = 0; i < p.agents; ++i) {
        Person person;
        person.id = person_id(i, p.agents);
        const Seconds leave = std::round(p.first_departure + window * i / p.agents);
        Plan plan;
        plan.activities = {activity("home", home, leave, 12 * 3600.0),
                           activity("work", work, std::nullopt, 8 * 3600.0)};
        plan.legs = {Leg{Mode::car, std::nullopt, {}}};
        person.plans.push_back(std::move(plan));
        out.population.persons.push_back(std::move(person));
    }
    out.config = base_config();
    out.config["iterations"] = 50;
    out.config["strategy"] = {{"modes", {"car"}}};
    return out;
}

GeneratedScenario generate_two_route_cordon(const TwoRouteCordonParams& p)
{
    if (p.agents < 1)
        throw ConfigError("two-route-cordon: agents must be positive");
    std::vector<Node> nodes{{"H0", 0, 0},       {"H", 500, 0},     {"C1", 1500, 0},    {"C2", 2500, 0},
                            {"W", 3500, 0},     {"W0", 4000, 0},   {"B1", 1500, 1200}, {"B2", 2500, 1200}};
    std::vector<Link> links;
    auto connect = [&](const Node& a, const Node& b) {
        const double len = std::round(std::hypot(a.x - b.x, a.y - b.y));
        links.push_back({a.id + "_" + b.id, a.id, b.id, len, 1200, 13.9, 1, {Mode::car}});
        links.push_back({b.id + "_" + a.id, b.id, a.id, len, 1200, 13.9, 1, {Mode::car}});
    };
    auto n = [&](const char* id) {
        return *std::find_if(nodes.begin(), nodes.end(), [&](const Node& x) { return x.id == id; });
    };
    connect(n("H0"), n("H"));
    connect(n("H"), n("C1"));
    connect(n("C1"), n("C2"));
    connect(n("C2"), n("W"));
    connect(n("W"), n("W0"));
    connect(n("H"), n("B1"));
    connect(n("B1"), n("B2"));
    connect(n("B2"), n("W"));
    GeneratedScenario out{Network(std::move(nodes), std::move(links)), {}, {}, {}};
    const LinkIndex home = out.net.link_index("H_H0");
    const LinkIndex work = out.net.link_index("W_W0");
    std::mt19937_64 rng(p.seed);
    for (int i = 0; i < p.agents; ++i) {
        Person person;
        person.id = person_id(i, p.agents);
        const Seconds leave_home = std::round(std::uniform_real_distribution<double>(7 * 3600.0, 9 * 3600.0)(rng));
        const Seconds leave_work = std::round(std::uniform_real_distribution<double>(16 * 3600.0, 18 * 3600.0)(rng));
        person.plans.push_back(commute(home, work, leave_home, leave_work, Mode::car));
        out.population.persons.push_back(std::move(person));
    }
    out.config = base_config();
    out.config["iterations"] = 20;
    out.config["seed"] = p.seed;
    out.config["strategy"] = {{"modes", {"car"}}};
    out.config["toll"] = {{"kind", "cordon"}, {"region", {"C1", "C2"}}, {"preset", std::string(kNycCbdBasePreset)}};
    return out;
}

void write_scenario(const GeneratedScenario& s, const fs::path& dir)
{
    fs::create_directories(dir);
    save_network(s.net, dir / "network.json");
    save_population(s.population, s.net, dir / "population.json");
    if (!s.lines.empty())
        save_transit(s.lines, dir / "transit.json");
    detail::write_text_file(dir / "config.json", detail::dump(s.config));
}

}  // namespace tollsim
