#include "tollsim/travel_time.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace tollsim {

namespace {

Seconds midpoint(std::size_t bin)
{
    return double(bin) * kTravelTimeBin + kTravelTimeBin / 2.0;
}

}  // namespace

TravelTimeField::TravelTimeField(const Network& net, int horizon)
    : bins_(static_cast<std::size_t>((horizon + kTravelTimeBin - 1) / kTravelTimeBin))
{
    if (bins_ == 0)
        bins_ = 1;
    free_flow_.reserve(net.link_count());
    for (const auto& l : net.links())
        free_flow_.push_back(l.free_flow_time());
    values_.resize(net.link_count() * bins_);
    for (std::size_t l = 0; l < net.link_count(); ++l)
        std::fill_n(values_.begin() + l * bins_, bins_, free_flow_[l]);
    finish();
}

TravelTimeField TravelTimeField::from_events(const EventStream& events, const Network& net, int horizon)
{
    TravelTimeField field(net, horizon);
    std::vector<double> sum(field.values_.size(), 0.0);
    std::vector<std::uint32_t> count(field.values_.size(), 0);
    std::unordered_map<std::string_view, std::pair<LinkIndex, int>> open;

    for (const auto& e : events) {
        if (e.kind == EventKind::link_enter) {
            if (auto l = net.find_link(e.link))
                open[e.person] = {*l, e.time};
        } else if (e.kind == EventKind::link_leave) {
            auto it = open.find(e.person);
            if (it == open.end() || net.link(it->second.first).id != e.link)
                continue;
            const auto [l, entered] = it->second;
            open.erase(it);
            auto bin = std::min<std::size_t>(std::max(entered, 0) / kTravelTimeBin, field.bins_ - 1);
            sum[l * field.bins_ + bin] += e.time - entered;
            ++count[l * field.bins_ + bin];
        }
    }
    for (std::size_t i = 0; i < sum.size(); ++i)
        if (count[i] > 0)
            field.values_[i] = std::max(sum[i] / count[i], field.free_flow_[i / field.bins_]);
    field.finish();
    return field;
}

void TravelTimeField::finish()
{
    const std::size_t links = free_flow_.size();
    prefix_max_.resize(values_.size());
    flat_.assign(links, true);
    for (std::size_t l = 0; l < links; ++l) {
        double running = -std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < bins_; ++b) {
            const double v = values_[l * bins_ + b];
            if (v != free_flow_[l])
                flat_[l] = false;
            running = std::max(running, midpoint(b) + v);
            prefix_max_[l * bins_ + b] = running;
        }
    }
}

Seconds TravelTimeField::raw_arrival(LinkIndex l, Seconds t) const
{
    const Seconds* v = &values_[l * bins_];
    if (t <= midpoint(0))
        return t + v[0];
    if (t >= midpoint(bins_ - 1))
        return t + v[bins_ - 1];
    const auto b = static_cast<std::size_t>((t - kTravelTimeBin / 2.0) / kTravelTimeBin);
    const double w = (t - midpoint(b)) / kTravelTimeBin;
    return t + v[b] + w * (v[b + 1] - v[b]);
}

Seconds TravelTimeField::travel_time(LinkIndex l, Seconds entry) const
{
    if (flat_[l])
        return free_flow_[l];
    double arrival = raw_arrival(l, entry);
    // anchors at or before `entry` bound the FIFO arrival from below
    if (entry >= midpoint(0)) {
        auto b = std::min(static_cast<std::size_t>((entry - kTravelTimeBin / 2.0) / kTravelTimeBin), bins_ - 1);
        arrival = std::max(arrival, prefix_max_[l * bins_ + b]);
    }
    return std::max(arrival - entry, free_flow_[l]);
}

}  // namespace tollsim
