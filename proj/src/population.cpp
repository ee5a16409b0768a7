#include "tollsim/population.hpp"

#include "json_util.hpp"

#include <cmath>
#include <limits>
#include <unordered_set>

namespace tollsim {

using detail::json;

std::optional<std::string> check_car_route(const Network& net, LinkIndex origin, LinkIndex dest,
                                           const CarRoute& route)
{
    if (route.links.empty()) {
        if (origin != dest)
            return "empty car route between different links '" + net.link(origin).id + "' and '" +
                   net.link(dest).id + "'";
        return std::nullopt;
    }
    NodeIndex at = net.to_node(origin);
    for (std::size_t i = 0; i < route.links.size(); ++i) {
        auto l = route.links[i];
        if (l >= net.link_count())
            return "route link index out of range";
        if (net.from_node(l) != at)
            return "route discontinuity at position " + std::to_string(i) + " (link '" + net.link(l).id + "')";
        if (!net.link(l).modes.contains(Mode::car))
            return "route uses link '" + net.link(l).id + "' closed to cars";
        at = net.to_node(l);
    }
    if (route.links.back() != dest)
        return "route ends on '" + net.link(route.links.back()).id + "' instead of destination link '" +
               net.link(dest).id + "'";
    return std::nullopt;
}

std::optional<std::string> check_plan(const Network& net, const Plan& plan)
{
    if (plan.activities.empty())
        return "plan has no activities";
    if (plan.legs.size() + 1 != plan.activities.size())
        return "plan must alternate activities and legs, starting and ending with an activity";
    for (std::size_t i = 0; i < plan.activities.size(); ++i) {
        const auto& a = plan.activities[i];
        if (a.link >= net.link_count())
            return "activity " + std::to_string(i) + " references an unknown link";
        if (!(a.typical_duration > 0.0))
            return "activity " + std::to_string(i) + ": typical_duration must be positive";
        bool final = i + 1 == plan.activities.size();
        if (!final && !a.end_time)
            return "activity " + std::to_string(i) + ": end_time required for non-final activity";
        if (a.end_time && !(*a.end_time >= 0.0 && *a.end_time <= kHorizon))
            return "activity " + std::to_string(i) + ": end_time outside [0, 30h]";
    }
    for (std::size_t i = 0; i < plan.legs.size(); ++i) {
        const auto& leg = plan.legs[i];
        if (const auto* car = std::get_if<CarRoute>(&leg.route)) {
            if (leg.mode != Mode::car)
                return "leg " + std::to_string(i) + ": link route on non-car leg";
            if (auto err = check_car_route(net, plan.activities[i].link, plan.activities[i + 1].link, *car))
                return "leg " + std::to_string(i) + ": " + *err;
        } else if (std::holds_alternative<PtRoute>(leg.route) && leg.mode != Mode::pt) {
            return "leg " + std::to_string(i) + ": transit route on non-pt leg";
        } else if (std::holds_alternative<TeleportRoute>(leg.route) &&
                   leg.mode != Mode::walk && leg.mode != Mode::bike) {
            return "leg " + std::to_string(i) + ": distance route on non-teleported leg";
        }
    }
    return std::nullopt;
}

void add_plan(Person& person, Plan plan, std::size_t max_plans)
{
    if (max_plans == 0)
        max_plans = 1;
    while (person.plans.size() >= max_plans) {
        auto score_of = [](const Plan& p) { return p.score.value_or(-std::numeric_limits<double>::infinity()); };
        // Oldest among the worst goes, except that a tie never evicts the selected plan.
        std::size_t worst = 0;
        for (std::size_t i = 1; i < person.plans.size(); ++i) {
            const double a = score_of(person.plans[i]);
            const double b = score_of(person.plans[worst]);
            if (a < b || (a == b && worst == person.selected))
                worst = i;
        }
        person.plans.erase(person.plans.begin() + static_cast<std::ptrdiff_t>(worst));
        if (person.selected > worst)
            --person.selected;
        else if (person.selected == worst)
            person.selected = 0;
    }
    person.plans.push_back(std::move(plan));
    person.selected = person.plans.size() - 1;
}

namespace {

Route route_from_json(const json& rec, Mode mode, const Network& net, const std::string& locus)
{
    auto it = rec.find("route");
    if (it == rec.end() || it->is_null())
        return std::monostate{};
    const auto& r = *it;
    if (!r.is_object())
        throw ParseError(locus + ": route must be an object");
    switch (mode) {
    case Mode::car: {
        CarRoute route;
        for (const auto& id : detail::required<std::vector<std::string>>(r, "links", locus)) {
            auto l = net.find_link(id);
            if (!l)
                throw ValidationError(locus + ": route references unknown link '" + id + "'");
            route.links.push_back(*l);
        }
        return route;
    }
    case Mode::pt: {
        PtRoute route;
        route.walk_only = detail::optional_field<bool>(r, "walk_only", false, locus);
        if (!route.walk_only) {
            route.line = detail::id_field(r, "line", locus);
            route.board_stop = detail::required<std::size_t>(r, "board", locus);
            route.alight_stop = detail::required<std::size_t>(r, "alight", locus);
        }
        return route;
    }
    case Mode::walk:
    case Mode::bike:
        return TeleportRoute{detail::required<double>(r, "distance", locus)};
    }
    return std::monostate{};
}

json route_to_json(const Route& route, const Network& net)
{
    if (const auto* car = std::get_if<CarRoute>(&route)) {
        json links = json::array();
        for (auto l : car->links)
            links.push_back(net.link(l).id);
        return {{"links", links}};
    }
    if (const auto* pt = std::get_if<PtRoute>(&route)) {
        if (pt->walk_only)
            return {{"walk_only", true}};
        return {{"line", pt->line}, {"board", pt->board_stop}, {"alight", pt->alight_stop}};
    }
    if (const auto* tp = std::get_if<TeleportRoute>(&route))
        return {{"distance", tp->distance}};
    return nullptr;
}

Plan plan_from_json(const json& rec, const Network& net, const std::string& locus)
{
    Plan plan;
    if (auto s = rec.find("score"); s != rec.end() && !s->is_null())
        plan.score = s->get<double>();
    auto elements = detail::required<json>(rec, "elements", locus);
    if (!elements.is_array())
        throw ParseError(locus + ": elements must be an array");
    for (std::size_t i = 0; i < elements.size(); ++i) {
        const auto& el = elements[i];
        std::string el_locus = locus + ".elements[" + std::to_string(i) + "]";
        auto type = detail::required<std::string>(el, "type", el_locus);
        bool expect_activity = i % 2 == 0;
        if ((type == "activity") != expect_activity || (type != "activity" && type != "leg"))
            throw ValidationError(el_locus + ": alternation violated (expected " +
                                  (expect_activity ? "activity" : "leg") + ", found '" + type + "')");
        if (expect_activity) {
            Activity a;
            a.kind = detail::required<std::string>(el, "kind", el_locus);
            auto link_id = detail::id_field(el, "link", el_locus);
            auto link = net.find_link(link_id);
            if (!link)
                throw ValidationError(el_locus + ": unknown link '" + link_id + "'");
            a.link = *link;
            if (auto e = el.find("end_time"); e != el.end() && !e->is_null())
                a.end_time = e->get<double>();
            a.typical_duration = detail::required<double>(el, "typical_duration", el_locus);
            plan.activities.push_back(std::move(a));
        } else {
            Leg leg;
            auto mode_name = detail::required<std::string>(el, "mode", el_locus);
            auto mode = parse_mode(mode_name);
            if (!mode)
                throw ValidationError(el_locus + ": unknown mode '" + mode_name + "'");
            leg.mode = *mode;
            if (auto d = el.find("departure_time"); d != el.end() && !d->is_null())
                leg.departure_time = d->get<double>();
            leg.route = route_from_json(el, leg.mode, net, el_locus);
            plan.legs.push_back(std::move(leg));
        }
    }
    if (elements.empty() || elements.size() % 2 == 0)
        throw ValidationError(locus + ": alternation violated (plan must start and end with an activity)");
    if (auto err = check_plan(net, plan))
        throw ValidationError(locus + ": " + *err);
    return plan;
}

json plan_to_json(const Plan& plan, const Network& net)
{
    json elements = json::array();
    for (std::size_t i = 0; i < plan.activities.size(); ++i) {
        const auto& a = plan.activities[i];
        json act = {{"type", "activity"}, {"kind", a.kind}, {"link", net.link(a.link).id}};
        if (a.end_time)
            act["end_time"] = *a.end_time;
        act["typical_duration"] = a.typical_duration;
        elements.push_back(std::move(act));
        if (i < plan.legs.size()) {
            const auto& leg = plan.legs[i];
            json l = {{"type", "leg"}, {"mode", std::string(to_string(leg.mode))}};
            if (leg.departure_time)
                l["departure_time"] = *leg.departure_time;
            if (leg.routed())
                l["route"] = route_to_json(leg.route, net);
            elements.push_back(std::move(l));
        }
    }
    json out = {{"elements", elements}};
    out["score"] = plan.score ? json(*plan.score) : json(nullptr);
    return out;
}

}  // namespace

Population population_from_json(const json& doc, const Network& net)
{
    if (!doc.is_array())
        throw ParseError("population: top level must be an array of persons");
    Population pop;
    pop.persons.reserve(doc.size());
    std::unordered_set<std::string> ids;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& rec = doc[i];
        std::string locus = "persons[" + std::to_string(i) + "]";
        if (!rec.is_object())
            throw ParseError(locus + ": expected an object");
        Person p;
        p.id = detail::id_field(rec, "id", locus);
        locus += " ('" + p.id + "')";
        if (!ids.insert(p.id).second)
            throw ValidationError(locus + ": duplicate person id");
        p.toll_exempt = detail::optional_field<bool>(rec, "toll_exempt", false, locus);
        auto plans = detail::required<json>(rec, "plans", locus);
        if (!plans.is_array() || plans.empty())
            throw ValidationError(locus + ": at least one plan required");
        for (std::size_t k = 0; k < plans.size(); ++k)
            p.plans.push_back(plan_from_json(plans[k], net, locus + ".plans[" + std::to_string(k) + "]"));
        p.selected = detail::optional_field<std::size_t>(rec, "selected", 0, locus);
        if (p.selected >= p.plans.size())
            throw ValidationError(locus + ": selected plan index out of range");
        pop.persons.push_back(std::move(p));
    }
    return pop;
}

json population_to_json(const Population& pop, const Network& net)
{
    json out = json::array();
    for (const auto& p : pop.persons) {
        json plans = json::array();
        for (const auto& plan : p.plans)
            plans.push_back(plan_to_json(plan, net));
        out.push_back({{"id", p.id}, {"toll_exempt", p.toll_exempt}, {"selected", p.selected}, {"plans", plans}});
    }
    return out;
}

Population load_population(const std::filesystem::path& path, const Network& net)
{
    auto text = detail::read_text_file(path);
    return population_from_json(detail::parse_json(text, path.string()), net);
}

void save_population(const Population& pop, const Network& net, const std::filesystem::path& path)
{
    detail::write_text_file(path, detail::dump(population_to_json(pop, net)));
}

}  // namespace tollsim
