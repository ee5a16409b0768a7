#include "tollsim/tolling.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <cmath>

namespace tollsim {

using detail::json;

void validate_periods(std::span<const TollPeriod> periods)
{
    if (periods.empty())
        throw ValidationError("toll periods: at least one period required");
    std::vector<std::pair<Seconds, Seconds>> pieces;
    for (const auto& p : periods) {
        if (!(p.amount >= 0.0) || !std::isfinite(p.amount))
            throw ValidationError("toll periods: amounts must be non-negative");
        if (!(p.start >= 0.0 && p.start < kSecondsPerDay && p.end >= 0.0 && p.end <= kSecondsPerDay))
            throw ValidationError("toll periods: bounds must lie within [0, 24h]");
        if (p.start == p.end)
            throw ValidationError("toll periods: empty period at " + format_clock(p.start));
        if (p.start < p.end) {
            pieces.emplace_back(p.start, p.end);
        } else {
            pieces.emplace_back(p.start, kSecondsPerDay);
            if (p.end > 0.0)
                pieces.emplace_back(0.0, p.end);
        }
    }
    std::sort(pieces.begin(), pieces.end());
    Seconds covered = 0.0;
    for (const auto& [s, e] : pieces) {
        if (s > covered)
            throw ValidationError("toll periods: gap from " + format_clock(covered) + " to " + format_clock(s));
        if (s < covered)
            throw ValidationError("toll periods: overlap at " + format_clock(s));
        covered = e;
    }
    if (covered < kSecondsPerDay)
        throw ValidationError("toll periods: gap from " + format_clock(covered) + " to 24:00:00");
}

TollScheme TollScheme::cordon_scheme(Cordon cordon, std::vector<TollPeriod> periods, bool once_per_day,
                                     TollDirection direction)
{
    validate_periods(periods);
    TollScheme s;
    s.kind_ = TollKind::cordon;
    s.periods_ = std::move(periods);
    s.once_per_day_ = once_per_day;
    s.direction_ = direction;
    auto link_count = cordon.is_entry.size();
    s.cordon_ = std::move(cordon);
    s.finish(link_count);
    return s;
}

TollScheme TollScheme::link_scheme(const Network& net, std::vector<LinkIndex> links, std::vector<TollPeriod> periods,
                                   bool once_per_day)
{
    validate_periods(periods);
    for (auto l : links)
        if (l >= net.link_count())
            throw ValidationError("toll scheme references an unknown link");
    TollScheme s;
    s.kind_ = TollKind::link;
    std::sort(links.begin(), links.end());
    links.erase(std::unique(links.begin(), links.end()), links.end());
    s.tolled_links_ = std::move(links);
    s.periods_ = std::move(periods);
    s.once_per_day_ = once_per_day;
    s.finish(net.link_count());
    return s;
}

void TollScheme::finish(std::size_t link_count)
{
    chargeable_.assign(link_count, false);
    if (kind_ == TollKind::cordon) {
        if (direction_ != TollDirection::exit)
            for (auto l : cordon_->entry_links)
                chargeable_[l] = true;
        if (direction_ != TollDirection::enter)
            for (auto l : cordon_->exit_links)
                chargeable_[l] = true;
    } else {
        for (auto l : tolled_links_)
            chargeable_[l] = true;
    }
    chargeable_count_ = static_cast<std::size_t>(std::count(chargeable_.begin(), chargeable_.end(), true));
}

void TollScheme::override_amounts(double amount)
{
    if (!(amount >= 0.0))
        throw ValidationError("toll amount must be non-negative");
    for (auto& p : periods_)
        p.amount = amount;
}

double TollScheme::rate_at(Seconds t) const
{
    Seconds tod = std::fmod(t, double(kSecondsPerDay));
    if (tod < 0)
        tod += kSecondsPerDay;
    for (const auto& p : periods_) {
        bool inside = p.start < p.end ? (tod >= p.start && tod < p.end) : (tod >= p.start || tod < p.end);
        if (inside)
            return p.amount;
    }
    return 0.0;  // unreachable for validated periods
}

double TollScheme::max_rate() const
{
    double m = 0.0;
    for (const auto& p : periods_)
        m = std::max(m, p.amount);
    return m;
}

bool ChargeHistory::charged_on(std::size_t person, long day) const
{
    auto it = last_day_.find(person);
    return it != last_day_.end() && it->second == day;
}

double on_link_enter(const TollScheme& scheme, const Charger& who, LinkIndex link, Seconds t, ChargeHistory& history)
{
    if (who.toll_exempt || !scheme.charged_modes().contains(who.mode) || !scheme.charges_link(link))
        return 0.0;
    double rate = scheme.rate_at(t);
    if (rate <= 0.0)
        return 0.0;
    if (scheme.once_per_day()) {
        long day = static_cast<long>(std::floor((t - scheme.day_reset()) / kSecondsPerDay));
        if (history.charged_on(who.person, day))
            return 0.0;
        history.record(who.person, day);
    }
    return rate;
}

std::vector<TollPeriod> nyc_cbd_base_periods()
{
    return {
        {6.0 * kSecondsPerHour, 20.0 * kSecondsPerHour, 9.0},
        {20.0 * kSecondsPerHour, 22.0 * kSecondsPerHour, 7.0},
        {22.0 * kSecondsPerHour, 6.0 * kSecondsPerHour, 5.0},
    };
}

std::string_view to_string(TollDirection d)
{
    switch (d) {
    case TollDirection::enter: return "enter";
    case TollDirection::exit: return "exit";
    case TollDirection::both: return "both";
    }
    return "both";
}

TollDirection parse_direction(std::string_view text)
{
    if (text == "enter")
        return TollDirection::enter;
    if (text == "exit")
        return TollDirection::exit;
    if (text == "both")
        return TollDirection::both;
    throw ConfigError("toll: unknown direction '" + std::string(text) + "'");
}

std::optional<TollScheme> toll_scheme_from_json(const json& section, const Network& net)
{
    if (section.is_null())
        return std::nullopt;
    if (!section.is_object())
        throw ConfigError("toll: section must be an object");
    const std::string locus = "toll";
    if (!detail::optional_field<bool>(section, "enabled", true, locus))
        return std::nullopt;

    std::vector<TollPeriod> periods;
    bool once_per_day = true;
    auto direction = TollDirection::both;
    std::string kind = "cordon";

    auto preset = detail::optional_field<std::string>(section, "preset", "", locus);
    if (!preset.empty()) {
        if (preset != kNycCbdBasePreset)
            throw ConfigError("toll: unknown preset '" + preset + "'");
        periods = nyc_cbd_base_periods();
    }
    if (auto p = section.find("periods"); p != section.end()) {
        periods.clear();
        for (const auto& rec : *p)
            periods.push_back({detail::required<double>(rec, "start", locus + ".periods"),
                               detail::required<double>(rec, "end", locus + ".periods"),
                               detail::required<double>(rec, "amount", locus + ".periods")});
    }
    once_per_day = detail::optional_field<bool>(section, "once_per_day", once_per_day, locus);
    direction = parse_direction(detail::optional_field<std::string>(section, "direction", "both", locus));
    kind = detail::optional_field<std::string>(section, "kind", kind, locus);

    auto with_rules = [&](TollScheme s) {
        if (auto m = section.find("charged_modes"); m != section.end()) {
            ModeSet modes;
            for (const auto& name : m->get<std::vector<std::string>>()) {
                auto mode = parse_mode(name);
                if (!mode)
                    throw ConfigError("toll: unknown charged mode '" + name + "'");
                modes.insert(*mode);
            }
            s.set_charged_modes(modes);
        }
        s.set_day_reset(detail::optional_field<double>(section, "day_reset", s.day_reset(), locus));
        if (auto o = section.find("override_amount"); o != section.end() && !o->is_null())
            s.override_amounts(o->get<double>());
        return s;
    };

    try {
        if (kind == "cordon") {
            auto region = detail::required<std::vector<std::string>>(section, "region", locus);
            return with_rules(
                TollScheme::cordon_scheme(build_cordon(net, region), std::move(periods), once_per_day, direction));
        }
        if (kind == "link") {
            std::vector<LinkIndex> links;
            for (const auto& id : detail::required<std::vector<std::string>>(section, "links", locus))
                links.push_back(net.link_index(id));
            return with_rules(TollScheme::link_scheme(net, std::move(links), std::move(periods), once_per_day));
        }
    } catch (const ValidationError& e) {
        throw ConfigError(std::string("toll: ") + e.what());
    } catch (const ParseError& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("toll: unknown kind '" + kind + "'");
}

}  // namespace tollsim
