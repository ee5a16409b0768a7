#include "tollsim/rundir.hpp"

#include "json_util.hpp"

#include <fmt/format.h>

#include <cmath>

#ifndef TOLLSIM_VERSION
#define TOLLSIM_VERSION "0.0.0"
#endif

namespace tollsim {

namespace fs = std::filesystem;
using detail::json;

std::string_view version()
{
    return TOLLSIM_VERSION;
}

namespace {

std::string metric_text(double v)
{
    return std::isinf(v) ? "inf" : format_number(v);
}

}  // namespace

std::string stats_csv(std::span<const IterationStats> stats)
{
    std::string out = "iteration,mean_score,std_score,share_car,share_pt,share_walk,share_bike,cordon_entries,"
                      "pt_boardings,convergence_metric\n";
    for (const auto& s : stats)
        out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", s.iteration, format_number(s.mean_score),
                           format_number(s.std_score), format_number(at(s.mode_share, Mode::car)),
                           format_number(at(s.mode_share, Mode::pt)), format_number(at(s.mode_share, Mode::walk)),
                           format_number(at(s.mode_share, Mode::bike)), s.cordon_entries, s.pt_boardings,
                           metric_text(s.convergence_metric));
    return out;
}

std::string scores_csv(std::span<const ScoreRow> rows, const Population& pop)
{
    std::string out = "iteration,person,score,executed_flag\n";
    out.reserve(rows.size() * 32);
    for (const auto& r : rows)
        out += fmt::format("{},{},{},{}\n", r.iteration, pop.persons.at(r.person).id,
                           r.score ? format_number(*r.score) : std::string(), r.executed ? 1 : 0);
    return out;
}

void write_run_dir(const fs::path& dir, const ScenarioConfig& config, const Scenario& scenario,
                   const RunResult& result)
{
    fs::create_directories(dir);
    detail::write_text_file(dir / "config.json", detail::dump(config_to_json(config)));
    detail::write_text_file(dir / "stats.csv", stats_csv(result.stats));
    write_events_csv(result.final_events, dir / "events.csv");
    detail::write_text_file(dir / "scores.csv", scores_csv(result.scores, result.population));
    save_population(result.population, scenario.net, dir / "population.json");

    json stuck = json::array();
    for (const auto& s : result.final_stuck)
        stuck.push_back({{"person", result.population.persons.at(s.person).id}, {"leg", s.leg}, {"where", s.where}});
    json meta = {{"seed", config.seed},
                 {"version", std::string(version())},
                 {"iterations", config.iterations},
                 {"converged", result.converged},
                 {"convergence_metric",
                  std::isinf(result.convergence_metric) ? json(nullptr) : json(result.convergence_metric)},
                 {"stuck_count", result.final_stuck.size()},
                 {"stuck", stuck},
                 {"network", config.resolve(config.network).string()}};
    detail::write_text_file(dir / "metadata.json", detail::dump(meta));
}

RunArtifacts load_run_dir(const fs::path& dir)
{
    for (const char* name : {"config.json", "metadata.json", "events.csv", "population.json", "stats.csv"})
        if (!fs::exists(dir / name))
            throw Error("incomplete run directory '" + dir.string() + "': missing " + name);
    auto config = load_config(dir / "config.json");
    auto meta = detail::parse_json(detail::read_text_file(dir / "metadata.json"), (dir / "metadata.json").string());
    auto net = load_network(config.resolve(config.network));
    auto events = read_events_csv(dir / "events.csv");
    auto pop = load_population(dir / "population.json", net);
    RunArtifacts out{std::move(config), std::move(meta), std::move(net), std::move(events), std::move(pop), {}};
    if (!out.config.cordon.empty())
        out.cordon = build_cordon(out.net, out.config.cordon);
    return out;
}

namespace {

std::string link_volumes_csv(const LinkVolumeTable& t, const Network& net)
{
    std::string out = "link_id,hour,volume,congestion_index\n";
    for (auto l : net.links_by_id())
        for (std::size_t h = 0; h < kReportHours; ++h) {
            auto ci = t.congestion_index(net, l, h);
            out += fmt::format("{},{},{},{}\n", net.link(l).id, h, t.volume[l][h], ci ? format_number(*ci) : "");
        }
    return out;
}

std::string ridership_csv(const PtRidership& r)
{
    std::string out = "hour,boardings,occupancy\n";
    for (std::size_t h = 0; h < kReportHours; ++h)
        out += fmt::format("{},{},{}\n", h, r.boardings[h], r.occupancy[h]);
    return out;
}

const char* category_name(std::size_t k)
{
    static const char* names[] = {"car", "pt", "walk", "bike", "access_walk", "egress_walk", "transit_walk"};
    return names[k];
}

std::string score_row_csv(const ScoreStats& s)
{
    return fmt::format("Scenario,Mean,Std,Minimum,Maximum,Median\nRun,{},{},{},{},{}\n", format_fixed2(s.mean),
                       format_fixed2(s.std), format_fixed2(s.min), format_fixed2(s.max), format_fixed2(s.median));
}

}  // namespace

void analyze_run(const fs::path& dir, std::size_t hour, const fs::path& out)
{
    if (hour >= kReportHours)
        throw ConfigError(fmt::format("hour must lie in [0, {})", kReportHours));
    const auto run = load_run_dir(dir);
    fs::create_directories(out);
    const auto volumes = link_volumes(run.events, run.net);
    detail::write_text_file(out / "link_volumes.csv", link_volumes_csv(volumes, run.net));
    detail::write_text_file(out / "pt_ridership.csv", ridership_csv(pt_ridership(run.events)));

    const auto counts = count_leg_categories(run.population);
    std::string modes = "category,count\n";
    for (std::size_t k = 0; k < kLegCategoryCount; ++k)
        modes += fmt::format("{},{}\n", category_name(k), counts[k]);
    detail::write_text_file(out / "mode_counts.csv", modes);
    detail::write_text_file(out / "score_stats.csv", score_row_csv(score_stats(run.population)));

    if (run.cordon) {
        const auto m = cordon_metrics(run.events, *run.cordon, run.net);
        std::string text = "hour,entries\n";
        for (std::size_t h = 0; h < kReportHours; ++h)
            text += fmt::format("{},{}\n", h, m.entries[h]);
        detail::write_text_file(out / "cordon.csv", text);
        detail::write_text_file(out / "cordon_summary.csv",
                                fmt::format("metric,value\ntotal_entries,{}\nunique_entering_persons,{}\n"
                                            "vmt_inside_km,{}\nrevenue,{}\n",
                                            m.total_entries(), m.unique_entering_persons,
                                            format_number(m.vmt_inside_km), format_number(m.revenue)));
    }
    detail::write_text_file(out / fmt::format("links_h{:02d}.geojson", hour),
                            detail::dump(export_geojson(run.net, volumes, hour)));
    if (!volumes.diagnostics.empty()) {
        std::string diag;
        for (const auto& d : volumes.diagnostics)
            diag += d + "\n";
        detail::write_text_file(out / "diagnostics.txt", diag);
    }
}

void compare_runs(const fs::path& a, const fs::path& b, const fs::path& out, bool force)
{
    const auto base = load_run_dir(a);
    const auto policy = load_run_dir(b);
    if (!force) {
        if (base.metadata.value("seed", json()) != policy.metadata.value("seed", json()))
            throw ConfigError("compare: runs use different seeds (pass --force to compare anyway)");
        if (!(base.net == policy.net))
            throw ConfigError("compare: runs use different networks (pass --force to compare anyway)");
    }
    fs::create_directories(out);

    const auto table = mode_share(policy.population, base.population);
    detail::write_text_file(out / "mode_share.csv", format_mode_share_csv(table));
    const auto s0 = score_stats(base.population);
    const auto s1 = score_stats(policy.population);
    detail::write_text_file(out / "score_stats.csv", format_score_stats_csv(s0, s1));

    const auto v0 = link_volumes(base.events, base.net);
    const auto v1 = link_volumes(policy.events, policy.net);
    std::string deltas = "link_id,hour,baseline,policy,delta\n";
    std::int64_t changed = 0;
    for (auto l : base.net.links_by_id()) {
        const auto& id = base.net.link(l).id;
        auto pl = policy.net.find_link(id);
        for (std::size_t h = 0; h < kReportHours; ++h) {
            const std::int64_t x = v0.volume[l][h];
            const std::int64_t y = pl ? std::int64_t(v1.volume[*pl][h]) : 0;
            changed += x != y;
            deltas += fmt::format("{},{},{},{},{}\n", id, h, x, y, y - x);
        }
    }
    detail::write_text_file(out / "link_volume_deltas.csv", deltas);

    std::string summary = fmt::format("baseline: {}\npolicy: {}\n", fs::absolute(a).string(), fs::absolute(b).string());
    summary += fmt::format("link-hour cells with changed volume: {}\n", changed);
    summary += fmt::format("mean score: {} -> {} (difference {})\n", format_fixed2(s0.mean), format_fixed2(s1.mean),
                           format_fixed2(s1.mean - s0.mean));
    auto car = static_cast<std::size_t>(LegCategory::car);
    auto pt = static_cast<std::size_t>(LegCategory::pt);
    summary += fmt::format("car legs: {} -> {}\npt legs: {} -> {}\n", table.without[car], table.with[car],
                           table.without[pt], table.with[pt]);

    std::string cordon = "metric,baseline,policy,delta\n";
    const auto* region = base.cordon ? &*base.cordon : nullptr;
    if (region) {
        const auto c0 = cordon_metrics(base.events, *region, base.net);
        const auto c1 = cordon_metrics(policy.events, *region, policy.net);
        auto row = [&](const std::string& name, double x, double y) {
            cordon += fmt::format("{},{},{},{}\n", name, format_number(x), format_number(y), format_number(y - x));
        };
        row("total_entries", double(c0.total_entries()), double(c1.total_entries()));
        row("unique_entering_persons", double(c0.unique_entering_persons), double(c1.unique_entering_persons));
        row("vmt_inside_km", c0.vmt_inside_km, c1.vmt_inside_km);
        row("revenue", c0.revenue, c1.revenue);
        for (std::size_t h = 0; h < kReportHours; ++h)
            row(fmt::format("entries_h{:02d}", h), double(c0.entries[h]), double(c1.entries[h]));
        summary += fmt::format("cordon entries: {} -> {}\nvmt inside (km): {} -> {}\nrevenue ($): {} -> {}\n",
                               c0.total_entries(), c1.total_entries(), format_number(c0.vmt_inside_km),
                               format_number(c1.vmt_inside_km), format_number(c0.revenue), format_number(c1.revenue));
    } else {
        summary += "no cordon configured in the baseline run\n";
    }
    detail::write_text_file(out / "cordon_deltas.csv", cordon);
    detail::write_text_file(out / "summary.txt", summary);
}

}  // namespace tollsim
