#pragma once

#include "tollsim/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace tollsim {

enum class EventKind : std::uint8_t {
    act_end,
    depart,
    link_enter,
    link_leave,
    arrive,
    act_start,
    board,
    alight,
    money,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view text);

/// One row of the event stream. `link` is empty when not applicable;
/// `mode` is set on depart/arrive/board/alight; `amount` is non-zero only on
/// money events (negative for charges).
struct Event {
    int time = 0;
    EventKind kind = EventKind::act_end;
    std::string person;
    std::string link;
    std::string mode;
    double amount = 0.0;

    friend bool operator==(const Event&, const Event&) = default;
};

using EventStream = std::vector<Event>;

inline constexpr std::string_view kEventCsvHeader = "time,kind,person,link,mode,amount";

void write_events_csv(const EventStream& events, std::ostream& out);
void write_events_csv(const EventStream& events, const std::filesystem::path& path);
EventStream read_events_csv(std::istream& in);
EventStream read_events_csv(const std::filesystem::path& path);

/// Splits a stream into per-person sub-streams, preserving order.
/// Keys are person ids.
std::vector<std::pair<std::string, EventStream>> group_by_person(const EventStream& events);

}  // namespace tollsim
