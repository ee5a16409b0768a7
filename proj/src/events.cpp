#include "tollsim/events.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <map>
#include <ostream>

namespace tollsim {

namespace {

constexpr std::string_view kKindNames[] = {
    "act_end", "depart", "link_enter", "link_leave", "arrive", "act_start", "board", "alight", "money",
};

std::vector<std::string_view> split_csv(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

}  // namespace

std::string_view to_string(EventKind kind)
{
    return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<EventKind> parse_event_kind(std::string_view text)
{
    for (std::size_t i = 0; i < std::size(kKindNames); ++i)
        if (kKindNames[i] == text)
            return static_cast<EventKind>(i);
    return std::nullopt;
}

void write_events_csv(const EventStream& events, std::ostream& out)
{
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "{}\n", kEventCsvHeader);
    for (const auto& e : events) {
        fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},", e.time, to_string(e.kind), e.person, e.link, e.mode);
        if (e.amount != 0.0)
            fmt::format_to(std::back_inserter(buf), "{}", e.amount);
        buf.push_back('\n');
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void write_events_csv(const EventStream& events, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write " + path.string());
    write_events_csv(events, out);
}

EventStream read_events_csv(std::istream& in)
{
    EventStream events;
    std::string line;
    if (!std::getline(in, line) || line != kEventCsvHeader)
        throw ParseError("events: line 1: expected header '" + std::string(kEventCsvHeader) + "'");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        auto cols = split_csv(line);
        auto where = "events: line " + std::to_string(line_no);
        if (cols.size() != 6)
            throw ParseError(where + ": expected 6 columns");
        Event e;
        auto [p, ec] = std::from_chars(cols[0].data(), cols[0].data() + cols[0].size(), e.time);
        if (ec != std::errc{} || p != cols[0].data() + cols[0].size())
            throw ParseError(where + ": bad time '" + std::string(cols[0]) + "'");
        auto kind = parse_event_kind(cols[1]);
        if (!kind)
            throw ParseError(where + ": unknown event kind '" + std::string(cols[1]) + "'");
        e.kind = *kind;
        e.person = cols[2];
        e.link = cols[3];
        e.mode = cols[4];
        if (!cols[5].empty()) {
            try {
                e.amount = std::stod(std::string(cols[5]));
            } catch (const std::exception&) {
                throw ParseError(where + ": bad amount '" + std::string(cols[5]) + "'");
            }
        }
        events.push_back(std::move(e));
    }
    return events;
}

EventStream read_events_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open " + path.string());
    return read_events_csv(in);
}

std::vector<std::pair<std::string, EventStream>> group_by_person(const EventStream& events)
{
    std::map<std::string, std::size_t> index;
    std::vector<std::pair<std::string, EventStream>> out;
    for (const auto& e : events) {
        auto [it, inserted] = index.emplace(e.person, out.size());
        if (inserted)
            out.emplace_back(e.person, EventStream{});
        out[it->second].second.push_back(e);
    }
    return out;
}

}  // namespace tollsim
