#include "tollsim/analysis.hpp"

#include "json_util.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

namespace tollsim {

using detail::json;

std::size_t hour_bin(int t)
{
    return std::min<std::size_t>(static_cast<std::size_t>(std::max(t, 0) / kSecondsPerHour), kReportHours - 1);
}

std::string format_number(double v)
{
    if (v == 0.0)
        return "0";
    return fmt::format("{}", v);
}

std::string format_fixed2(double v)
{
    auto s = fmt::format("{:.2f}", v);
    if (s == "-0.00")
        return "0.00";
    return s;
}

// --- link volumes -------------------------------------------------------------

std::optional<double> LinkVolumeTable::congestion_index(const Network& net, LinkIndex l, std::size_t hour) const
{
    if (volume[l][hour] == 0)
        return std::nullopt;
    return time_sum[l][hour] / volume[l][hour] / net.link(l).free_flow_time();
}

std::uint64_t LinkVolumeTable::total() const
{
    std::uint64_t n = 0;
    for (const auto& row : volume)
        for (auto v : row)
            n += v;
    return n;
}

LinkVolumeTable link_volumes(const EventStream& events, const Network& net)
{
    LinkVolumeTable table;
    table.volume.assign(net.link_count(), {});
    table.time_sum.assign(net.link_count(), {});
    std::unordered_map<std::string_view, std::pair<LinkIndex, int>> open;
    for (const auto& e : events) {
        if (e.kind == EventKind::link_enter) {
            auto l = net.find_link(e.link);
            if (!l) {
                table.diagnostics.push_back(fmt::format("{}: link_enter on unknown link '{}'", e.time, e.link));
                continue;
            }
            if (auto it = open.find(e.person); it != open.end())
                table.diagnostics.push_back(fmt::format("{}: person '{}' entered '{}' while still on '{}'", e.time,
                                                        e.person, e.link, net.link(it->second.first).id));
            open[e.person] = {*l, e.time};
        } else if (e.kind == EventKind::link_leave) {
            auto it = open.find(e.person);
            if (it == open.end() || net.link(it->second.first).id != e.link) {
                table.diagnostics.push_back(
                    fmt::format("{}: person '{}' left '{}' without entering it", e.time, e.person, e.link));
                continue;
            }
            auto [l, entered] = it->second;
            open.erase(it);
            const auto h = hour_bin(entered);
            ++table.volume[l][h];
            table.time_sum[l][h] += e.time - entered;
        }
    }
    std::vector<std::string> unpaired;
    for (const auto& [person, state] : open)
        unpaired.push_back(fmt::format("person '{}' still on '{}' at end of stream", person,
                                       net.link(state.first).id));
    std::sort(unpaired.begin(), unpaired.end());
    table.diagnostics.insert(table.diagnostics.end(), unpaired.begin(), unpaired.end());
    return table;
}

// --- transit ridership ----------------------------------------------------------

PtRidership pt_ridership(const EventStream& events)
{
    PtRidership r;
    std::array<std::int64_t, kReportHours> net_change{};
    std::unordered_map<std::string_view, int> riding;
    for (const auto& e : events) {
        if (e.kind == EventKind::board) {
            if (riding[e.person] > 0)
                r.diagnostics.push_back(fmt::format("{}: person '{}' boarded twice", e.time, e.person));
            ++riding[e.person];
            ++r.boardings[hour_bin(e.time)];
            ++net_change[hour_bin(e.time)];
        } else if (e.kind == EventKind::alight) {
            if (riding[e.person] <= 0) {
                r.diagnostics.push_back(fmt::format("{}: person '{}' alighted without boarding", e.time, e.person));
                continue;
            }
            --riding[e.person];
            --net_change[hour_bin(e.time)];
        }
    }
    std::int64_t on_board = 0;
    for (std::size_t h = 0; h < kReportHours; ++h) {
        on_board += net_change[h];
        r.occupancy[h] = on_board;
    }
    return r;
}

// --- mode share -------------------------------------------------------------------

CategoryCounts count_leg_categories(const Population& pop)
{
    CategoryCounts c{};
    auto bump = [&](LegCategory k) { ++c[static_cast<std::size_t>(k)]; };
    for (const auto& person : pop.persons) {
        for (const auto& leg : person.selected_plan().legs) {
            switch (leg.mode) {
            case Mode::car: bump(LegCategory::car); break;
            case Mode::walk: bump(LegCategory::walk); break;
            case Mode::bike: bump(LegCategory::bike); break;
            case Mode::pt: {
                const auto* r = std::get_if<PtRoute>(&leg.route);
                if (r && r->walk_only) {
                    bump(LegCategory::transit_walk);
                } else {
                    bump(LegCategory::pt);
                    bump(LegCategory::access_walk);
                    bump(LegCategory::egress_walk);
                }
                break;
            }
            }
        }
    }
    return c;
}

ModeShareTable mode_share(const Population& policy, const Population& baseline)
{
    std::set<std::string> a;
    std::set<std::string> b;
    for (const auto& p : policy.persons)
        a.insert(p.id);
    for (const auto& p : baseline.persons)
        b.insert(p.id);
    if (a != b)
        throw Error("mode_share: the two populations hold different persons");
    return {count_leg_categories(baseline), count_leg_categories(policy)};
}

std::optional<double> change_ratio(double without, double with)
{
    if (without == 0.0)
        return std::nullopt;
    return (with - without) / without * 100.0;
}

namespace {

// Table column -> simulated category (none: not simulated).
const std::vector<std::pair<std::string, std::optional<LegCategory>>>& mode_columns()
{
    static const std::vector<std::pair<std::string, std::optional<LegCategory>>> cols{
        {"FHV", std::nullopt},
        {"Access walk", LegCategory::access_walk},
        {"Bike", LegCategory::bike},
        {"Car", LegCategory::car},
        {"Pt", LegCategory::pt},
        {"Ride", std::nullopt},
        {"Taxi", std::nullopt},
        {"Transit walk", LegCategory::transit_walk},
        {"Cb", std::nullopt},
        {"Egress walk", LegCategory::egress_walk},
        {"Walk", LegCategory::walk},
    };
    return cols;
}

}  // namespace

std::vector<std::string> mode_share_columns()
{
    std::vector<std::string> out{"Scenario"};
    for (const auto& [name, cat] : mode_columns())
        out.push_back(name);
    return out;
}

std::string format_mode_share_csv(const ModeShareTable& table)
{
    std::string out;
    auto header = mode_share_columns();
    for (std::size_t i = 0; i < header.size(); ++i)
        out += (i ? "," : "") + header[i];
    out += '\n';
    auto row = [&](const char* label, auto cell) {
        out += label;
        for (const auto& [name, cat] : mode_columns())
            out += "," + (cat ? cell(static_cast<std::size_t>(*cat)) : std::string("n/a"));
        out += '\n';
    };
    row("Without pricing", [&](std::size_t k) { return std::to_string(table.without[k]); });
    row("With pricing", [&](std::size_t k) { return std::to_string(table.with[k]); });
    row("Change ratio %", [&](std::size_t k) {
        auto r = change_ratio(double(table.without[k]), double(table.with[k]));
        return r ? format_fixed2(*r) : std::string("n/a");
    });
    return out;
}

// --- score statistics ------------------------------------------------------------

ScoreStats score_stats(std::span<const double> scores)
{
    ScoreStats s;
    s.count = scores.size();
    if (scores.empty())
        return s;
    std::vector<double> v(scores.begin(), scores.end());
    std::sort(v.begin(), v.end());
    double sum = 0.0;
    for (double x : v)
        sum += x;
    s.mean = sum / double(v.size());
    double ss = 0.0;
    for (double x : v)
        ss += (x - s.mean) * (x - s.mean);
    s.std = v.size() > 1 ? std::sqrt(ss / double(v.size() - 1)) : 0.0;
    s.min = v.front();
    s.max = v.back();
    const std::size_t n = v.size();
    s.median = n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
    return s;
}

ScoreStats score_stats(const Population& pop)
{
    std::vector<double> scores;
    for (const auto& p : pop.persons) {
        const auto& plan = p.selected_plan();
        if (!plan.score)
            throw Error("score_stats: person '" + p.id + "' has an unscored selected plan");
        scores.push_back(*plan.score);
    }
    return score_stats(scores);
}

std::vector<std::string> score_stats_columns()
{
    return {"Scenario", "Mean", "Std", "Minimum", "Maximum", "Median"};
}

std::string format_score_stats_csv(const ScoreStats& without, const ScoreStats& with)
{
    std::string out = "Scenario,Mean,Std,Minimum,Maximum,Median\n";
    auto row = [&](const char* label, double mean, double sd, double lo, double hi, double med) {
        out += fmt::format("{},{},{},{},{},{}\n", label, format_fixed2(mean), format_fixed2(sd), format_fixed2(lo),
                           format_fixed2(hi), format_fixed2(med));
    };
    row("Without pricing", without.mean, without.std, without.min, without.max, without.median);
    row("With pricing", with.mean, with.std, with.min, with.max, with.median);
    row("Difference", with.mean - without.mean, with.std - without.std, with.min - without.min,
        with.max - without.max, with.median - without.median);
    return out;
}

// --- cordon -----------------------------------------------------------------------

std::uint64_t CordonMetrics::total_entries() const
{
    std::uint64_t n = 0;
    for (auto e : entries)
        n += e;
    return n;
}

CordonMetrics cordon_metrics(const EventStream& events, const Cordon& cordon, const Network& net)
{
    CordonMetrics m;
    std::set<std::string_view> entering;
    for (const auto& e : events) {
        if (e.kind == EventKind::money) {
            m.revenue += -e.amount;
            continue;
        }
        if (e.kind != EventKind::link_enter)
            continue;
        auto l = net.find_link(e.link);
        if (!l)
            continue;
        if (cordon.is_entry[*l]) {
            ++m.entries[hour_bin(e.time)];
            entering.insert(e.person);
        }
        if (cordon.inside[net.from_node(*l)] && cordon.inside[net.to_node(*l)])
            m.vmt_inside_km += net.link(*l).length / 1000.0;
    }
    m.unique_entering_persons = entering.size();
    return m;
}

// --- GeoJSON ------------------------------------------------------------------------

json export_geojson(const Network& net, const LinkVolumeTable& table, std::size_t hour)
{
    if (hour >= kReportHours)
        throw Error("export_geojson: hour out of range");
    json features = json::array();
    for (LinkIndex l = 0; l < net.link_count(); ++l) {
        const auto& a = net.node(net.from_node(l));
        const auto& b = net.node(net.to_node(l));
        json props = {{"link_id", net.link(l).id},
                      {"volume", l < table.volume.size() ? table.volume[l][hour] : 0u}};
        auto ci = l < table.volume.size() ? table.congestion_index(net, l, hour) : std::nullopt;
        props["congestion_index"] = ci ? json(*ci) : json(nullptr);
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "LineString"}, {"coordinates", {{a.x, a.y}, {b.x, b.y}}}}},
                            {"properties", props}});
    }
    return {{"type", "FeatureCollection"}, {"features", features}};
}

}  // namespace tollsim
