#pragma once

#include "tollsim/events.hpp"
#include "tollsim/network.hpp"

#include <vector>

namespace tollsim {

inline constexpr int kTravelTimeBin = 900;  // s

/// Per-link experienced travel times in 15-minute entry bins.
///
/// `bin_value` is the stored mean (free-flow for bins nobody entered).
/// `travel_time` is what the router sees: values are linearly interpolated
/// between bin midpoints and then made FIFO, i.e. entering later never
/// leaves earlier. The result never drops below free-flow time.
class TravelTimeField {
public:
    /// Free-flow everywhere.
    explicit TravelTimeField(const Network& net, int horizon = kHorizon);

    /// Mean (link_leave - link_enter) of the traversals entering in each bin.
    static TravelTimeField from_events(const EventStream& events, const Network& net, int horizon = kHorizon);

    std::size_t bin_count() const { return bins_; }
    Seconds bin_value(LinkIndex l, std::size_t bin) const { return values_[l * bins_ + bin]; }
    Seconds free_flow(LinkIndex l) const { return free_flow_[l]; }

    Seconds travel_time(LinkIndex l, Seconds entry) const;
    Seconds exit_time(LinkIndex l, Seconds entry) const { return entry + travel_time(l, entry); }

private:
    void finish();
    Seconds raw_arrival(LinkIndex l, Seconds t) const;

    std::size_t bins_;
    std::vector<Seconds> free_flow_;
    std::vector<Seconds> values_;      // link-major
    std::vector<Seconds> prefix_max_;  // running max of arrival time at each bin midpoint
    std::vector<bool> flat_;           // link has free-flow in every bin
};

}  // namespace tollsim
