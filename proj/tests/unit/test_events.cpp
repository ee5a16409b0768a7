#include "tollsim/events.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace tollsim;

TEST(Events, CsvRoundTrip)
{
    EventStream events{
        {28800, EventKind::act_end, "p1", "home", "", 0.0},
        {28800, EventKind::depart, "p1", "home", "car", 0.0},
        {28801, EventKind::link_enter, "p1", "AB", "", 0.0},
        {28801, EventKind::money, "p1", "AB", "", -9.0},
        {28901, EventKind::link_leave, "p1", "AB", "", 0.0},
        {29000, EventKind::board, "p2", "", "pt", 0.0},
        {29100, EventKind::money, "p3", "", "", -0.1},
    };
    std::stringstream buf;
    write_events_csv(events, buf);
    const std::string text = buf.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), kEventCsvHeader);
    EXPECT_NE(text.find("28801,money,p1,AB,,-9\n"), std::string::npos);
    EXPECT_NE(text.find("28800,act_end,p1,home,,\n"), std::string::npos);
    std::stringstream in(text);
    EXPECT_EQ(read_events_csv(in), events);
}

TEST(Events, ParseErrorsCarryLine)
{
    std::stringstream bad_kind(std::string(kEventCsvHeader) + "\n1,act_end,p,l,,\n2,teleport,p,l,,\n");
    try {
        read_events_csv(bad_kind);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
    std::stringstream no_header("1,act_end,p,l,,\n");
    EXPECT_THROW(read_events_csv(no_header), ParseError);
    std::stringstream short_row(std::string(kEventCsvHeader) + "\n1,act_end,p\n");
    EXPECT_THROW(read_events_csv(short_row), ParseError);
}

TEST(Events, GroupByPersonKeepsOrder)
{
    EventStream events{
        {1, EventKind::act_end, "b", "", "", 0.0},
        {1, EventKind::act_end, "a", "", "", 0.0},
        {2, EventKind::depart, "b", "", "", 0.0},
        {3, EventKind::depart, "a", "", "", 0.0},
    };
    auto groups = group_by_person(events);
    ASSERT_EQ(groups.size(), 2u);
    EXPECT_EQ(groups[0].first, "b");
    ASSERT_EQ(groups[0].second.size(), 2u);
    EXPECT_EQ(groups[0].second[1].kind, EventKind::depart);
    EXPECT_EQ(groups[1].first, "a");
}

TEST(Events, KindNamesRoundTrip)
{
    for (int k = 0; k <= static_cast<int>(EventKind::money); ++k) {
        auto kind = static_cast<EventKind>(k);
        EXPECT_EQ(parse_event_kind(to_string(kind)), kind);
    }
    EXPECT_FALSE(parse_event_kind("nope"));
}
