#include "tollsim/transit.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <cmath>

namespace tollsim {

using detail::json;

Seconds TransitLine::stop_offset(std::size_t i) const
{
    Seconds off = 0.0;
    for (std::size_t k = 0; k < i && k < inter_stop_times.size(); ++k)
        off += inter_stop_times[k];
    return off;
}

std::optional<Seconds> next_departure(const TransitLine& line, std::size_t stop_index, Seconds t)
{
    if (line.headway <= 0.0 || line.last_departure < line.first_departure)
        return std::nullopt;
    const Seconds offset = line.stop_offset(stop_index);
    const auto last_run = static_cast<long>(std::floor((line.last_departure - line.first_departure) / line.headway));
    long k = static_cast<long>(std::ceil((t - offset - line.first_departure) / line.headway));
    k = std::max(k, 0L);
    // guard against rounding in the division
    while (k > 0 && line.first_departure + double(k - 1) * line.headway + offset >= t)
        --k;
    while (line.first_departure + double(k) * line.headway + offset < t)
        ++k;
    if (k > last_run)
        return std::nullopt;
    return line.first_departure + double(k) * line.headway + offset;
}

double distance(Point a, Point b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

TransitSchedule::TransitSchedule(std::vector<TransitLine> lines, const Network& net) : lines_(std::move(lines))
{
    for (std::size_t i = 0; i < lines_.size(); ++i) {
        const auto& l = lines_[i];
        const std::string where = "transit line '" + l.id + "'";
        if (!by_id_.emplace(l.id, i).second)
            throw ValidationError(where + ": duplicate id");
        if (l.stops.size() < 2)
            throw ValidationError(where + ": needs at least two stops");
        if (l.inter_stop_times.size() + 1 != l.stops.size())
            throw ValidationError(where + ": inter_stop_times must have one entry per consecutive stop pair");
        for (auto dt : l.inter_stop_times)
            if (!(dt >= 0.0 && std::isfinite(dt)))
                throw ValidationError(where + ": inter_stop_times must be non-negative");
        if (!(l.headway > 0.0))
            throw ValidationError(where + ": headway must be positive");
        if (!(l.first_departure >= 0.0 && l.last_departure >= l.first_departure))
            throw ValidationError(where + ": departure span is invalid");
        std::vector<Point> pts;
        for (const auto& s : l.stops) {
            auto n = net.find_node(s);
            if (!n)
                throw ValidationError(where + ": unknown stop node '" + s + "'");
            pts.push_back({net.node(*n).x, net.node(*n).y});
        }
        stop_points_.push_back(std::move(pts));
    }
}

const TransitLine* TransitSchedule::find_line(std::string_view id) const
{
    auto it = by_id_.find(std::string(id));
    return it == by_id_.end() ? nullptr : &lines_[it->second];
}

Point TransitSchedule::stop_point(const TransitLine& line, std::size_t i) const
{
    return stop_points_[by_id_.at(line.id)].at(i);
}

std::optional<PtItinerary> TransitSchedule::replay(Point origin, Point destination, const std::string& line_id,
                                                   std::size_t board_stop, std::size_t alight_stop,
                                                   Seconds departure) const
{
    const auto* line = find_line(line_id);
    if (!line || board_stop >= alight_stop || alight_stop >= line->stops.size())
        return std::nullopt;
    PtItinerary it;
    it.line = line->id;
    it.board_stop = board_stop;
    it.alight_stop = alight_stop;
    it.access_walk = distance(origin, stop_point(*line, board_stop)) / kWalkSpeed;
    auto dep = next_departure(*line, board_stop, departure + it.access_walk);
    if (!dep)
        return std::nullopt;
    it.board_time = *dep;
    it.wait = *dep - (departure + it.access_walk);
    it.in_vehicle = line->stop_offset(alight_stop) - line->stop_offset(board_stop);
    it.alight_time = it.board_time + it.in_vehicle;
    it.egress_walk = distance(stop_point(*line, alight_stop), destination) / kWalkSpeed;
    return it;
}

std::optional<PtItinerary> TransitSchedule::itinerary(Point origin, Point destination, Seconds departure,
                                                      double max_walk) const
{
    std::optional<PtItinerary> best;
    std::string best_line;
    auto arrival = [&](const PtItinerary& it) { return departure + it.travel_time(); };

    // lines_ are scanned in id order for the tie-break
    std::vector<std::size_t> order(lines_.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return lines_[a].id < lines_[b].id; });

    for (auto li : order) {
        const auto& line = lines_[li];
        const auto& pts = stop_points_[li];
        for (std::size_t b = 0; b + 1 < pts.size(); ++b) {
            if (distance(origin, pts[b]) > max_walk)
                continue;
            for (std::size_t a = b + 1; a < pts.size(); ++a) {
                if (distance(pts[a], destination) > max_walk)
                    continue;
                auto it = replay(origin, destination, line.id, b, a, departure);
                if (it && (!best || arrival(*it) < arrival(*best)))
                    best = std::move(it);
            }
        }
    }
    if (!best)
        return std::nullopt;
    Seconds direct = distance(origin, destination) / kWalkSpeed;
    if (departure + direct <= arrival(*best)) {
        PtItinerary walk;
        walk.walk_only = true;
        walk.access_walk = direct;
        return walk;
    }
    return best;
}

std::vector<TransitLine> transit_lines_from_json(const json& doc)
{
    if (!doc.is_array())
        throw ParseError("transit: top level must be an array of lines");
    std::vector<TransitLine> lines;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& rec = doc[i];
        std::string locus = "lines[" + std::to_string(i) + "]";
        TransitLine l;
        l.id = detail::id_field(rec, "id", locus);
        for (const auto& s : detail::required<json>(rec, "stops", locus))
            l.stops.push_back(s.is_string() ? s.get<std::string>() : s.dump());
        l.inter_stop_times = detail::required<std::vector<double>>(rec, "inter_stop_times", locus);
        l.first_departure = detail::required<double>(rec, "first_departure", locus);
        l.last_departure = detail::required<double>(rec, "last_departure", locus);
        l.headway = detail::required<double>(rec, "headway", locus);
        lines.push_back(std::move(l));
    }
    return lines;
}

json transit_lines_to_json(std::span<const TransitLine> lines)
{
    json out = json::array();
    for (const auto& l : lines)
        out.push_back({{"id", l.id},
                       {"stops", l.stops},
                       {"inter_stop_times", l.inter_stop_times},
                       {"first_departure", l.first_departure},
                       {"last_departure", l.last_departure},
                       {"headway", l.headway}});
    return out;
}

TransitSchedule load_transit(const std::filesystem::path& path, const Network& net)
{
    auto text = detail::read_text_file(path);
    return TransitSchedule(transit_lines_from_json(detail::parse_json(text, path.string())), net);
}

void save_transit(std::span<const TransitLine> lines, const std::filesystem::path& path)
{
    detail::write_text_file(path, detail::dump(transit_lines_to_json(lines)));
}

}  // namespace tollsim
