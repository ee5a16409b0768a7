#pragma once

#include "tollsim/events.hpp"
#include "tollsim/network.hpp"
#include "tollsim/population.hpp"

#include <nlohmann/json_fwd.hpp>

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tollsim {

inline constexpr std::size_t kReportHours = 30;  // [h:00, h+1:00) bins over the horizon

std::size_t hour_bin(int t);

struct LinkVolumeTable {
    /// volume[link][hour]: traversals entering in that hour and leaving later.
    std::vector<std::array<std::uint32_t, kReportHours>> volume;
    /// Summed experienced time of those traversals, for the congestion index.
    std::vector<std::array<double, kReportHours>> time_sum;
    std::vector<std::string> diagnostics;

    /// Mean experienced time over free-flow time; none without traffic.
    std::optional<double> congestion_index(const Network& net, LinkIndex l, std::size_t hour) const;
    std::uint64_t total() const;
};

LinkVolumeTable link_volumes(const EventStream& events, const Network& net);

struct PtRidership {
    std::array<std::uint64_t, kReportHours> boardings{};
    /// Riders on board at the end of each hour (cumulative boards - alights).
    std::array<std::int64_t, kReportHours> occupancy{};
    std::vector<std::string> diagnostics;
};

PtRidership pt_ridership(const EventStream& events);

/// Trip-leg categories counted for the mode-choice table. A pt ride counts
/// one pt leg plus one access and one egress walk; a pt trip that walks the
/// whole way counts as a transit walk.
enum class LegCategory : std::uint8_t { car, pt, walk, bike, access_walk, egress_walk, transit_walk };
inline constexpr std::size_t kLegCategoryCount = 7;

using CategoryCounts = std::array<std::uint64_t, kLegCategoryCount>;

/// Counts over every person's selected plan.
CategoryCounts count_leg_categories(const Population& pop);

struct ModeShareTable {
    CategoryCounts without{};
    CategoryCounts with{};
};

/// Throws Error when the two populations do not hold the same persons.
ModeShareTable mode_share(const Population& policy, const Population& baseline);

/// "Change in mode choice" table with the full column set, in order: FHV,
/// Access walk, Bike, Car, Pt, Ride, Taxi, Transit walk, Cb, Egress walk,
/// Walk. FHV, Ride, Taxi and Cb are not simulated and print as n/a.
std::string format_mode_share_csv(const ModeShareTable& table);
std::vector<std::string> mode_share_columns();

/// (with - without) / without * 100, or none when without is 0.
std::optional<double> change_ratio(double without, double with);

struct ScoreStats {
    std::size_t count = 0;
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation
    double min = 0.0;
    double max = 0.0;
    double median = 0.0;
};

ScoreStats score_stats(std::span<const double> scores);
/// Selected-plan scores; throws Error if one is unscored.
ScoreStats score_stats(const Population& pop);

/// "Change in trip score" table: Scenario, Mean, Std, Minimum, Maximum,
/// Median; rows without pricing, with pricing, and the difference.
std::string format_score_stats_csv(const ScoreStats& without, const ScoreStats& with);
std::vector<std::string> score_stats_columns();

struct CordonMetrics {
    std::array<std::uint64_t, kReportHours> entries{};
    std::uint64_t unique_entering_persons = 0;
    double vmt_inside_km = 0.0;
    double revenue = 0.0;

    std::uint64_t total_entries() const;
};

CordonMetrics cordon_metrics(const EventStream& events, const Cordon& cordon, const Network& net);

/// FeatureCollection of one LineString per link (from-node to to-node) with
/// properties link_id, volume and congestion_index (null without traffic).
nlohmann::json export_geojson(const Network& net, const LinkVolumeTable& table, std::size_t hour);

/// Shortest round-trip text for a double, used in every CSV.
std::string format_number(double v);
/// Fixed two-decimal text for table cells; never prints "-0.00".
std::string format_fixed2(double v);

}  // namespace tollsim
