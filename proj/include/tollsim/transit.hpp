#pragma once

#include "tollsim/network.hpp"
#include "tollsim/types.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace tollsim {

inline constexpr double kMaxAccessWalk = 1000.0;  // m, crow-fly

/// Fixed-headway line. Vehicle k leaves the first stop at
/// first_departure + k * headway for every such time <= last_departure.
struct TransitLine {
    std::string id;
    std::vector<std::string> stops;          // node ids, in travel order
    std::vector<Seconds> inter_stop_times;   // size stops - 1
    Seconds first_departure = 0.0;
    Seconds last_departure = 0.0;
    Seconds headway = 0.0;

    /// Offset of stop `i` from the vehicle's start at stop 0.
    Seconds stop_offset(std::size_t i) const;

    friend bool operator==(const TransitLine&, const TransitLine&) = default;
};

/// Smallest scheduled departure at `stop_index` not earlier than `t`, or none
/// when no vehicle remains.
std::optional<Seconds> next_departure(const TransitLine& line, std::size_t stop_index, Seconds t);

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance(Point a, Point b);

struct PtItinerary {
    bool walk_only = false;
    std::string line;
    std::size_t board_stop = 0;
    std::size_t alight_stop = 0;
    Seconds access_walk = 0.0;
    Seconds wait = 0.0;
    Seconds in_vehicle = 0.0;
    Seconds egress_walk = 0.0;
    Seconds board_time = 0.0;
    Seconds alight_time = 0.0;

    Seconds travel_time() const { return access_walk + wait + in_vehicle + egress_walk; }
};

/// Lines plus resolved stop coordinates. Immutable after construction.
class TransitSchedule {
public:
    TransitSchedule() = default;
    /// Throws ValidationError for malformed lines or stops not in the network.
    TransitSchedule(std::vector<TransitLine> lines, const Network& net);

    std::span<const TransitLine> lines() const { return lines_; }
    const TransitLine* find_line(std::string_view id) const;
    Point stop_point(const TransitLine& line, std::size_t i) const;
    bool empty() const { return lines_.empty(); }

    /// Earliest-arrival direct itinerary between two points. Candidates are
    /// every line and every stop pair (board before alight) with both stops
    /// within the walk radius; ties go to the lower line id, then the earlier
    /// stop pair. When walking the whole way arrives no later than the best
    /// ride, a walk-only itinerary is returned instead. Returns none when no
    /// line serves the pair at or after `departure`.
    std::optional<PtItinerary> itinerary(Point origin, Point destination, Seconds departure,
                                         double max_walk = kMaxAccessWalk) const;

    /// Replays a fixed ride (line and stop pair) from `departure`; none when
    /// the service has ended.
    std::optional<PtItinerary> replay(Point origin, Point destination, const std::string& line,
                                      std::size_t board_stop, std::size_t alight_stop,
                                      Seconds departure) const;

private:
    std::vector<TransitLine> lines_;
    std::vector<std::vector<Point>> stop_points_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

std::vector<TransitLine> transit_lines_from_json(const nlohmann::json& doc);
nlohmann::json transit_lines_to_json(std::span<const TransitLine> lines);
TransitSchedule load_transit(const std::filesystem::path& path, const Network& net);
void save_transit(std::span<const TransitLine> lines, const std::filesystem::path& path);

}  // namespace tollsim
