#pragma once

#include "tollsim/network.hpp"
#include "tollsim/types.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace tollsim {

/// Half-open [start, end) in seconds since midnight. start > end wraps
/// midnight; end may equal 24 h.
struct TollPeriod {
    Seconds start = 0.0;
    Seconds end = 0.0;
    double amount = 0.0;  // dollars

    friend bool operator==(const TollPeriod&, const TollPeriod&) = default;
};

enum class TollKind : std::uint8_t { cordon, link };
enum class TollDirection : std::uint8_t { enter, exit, both };

/// Throws ValidationError unless the periods tile [0, 24 h) exactly, with
/// non-negative amounts.
void validate_periods(std::span<const TollPeriod> periods);

class TollScheme {
public:
    /// Cordon scheme over `cordon`; charges crossings in `direction`.
    static TollScheme cordon_scheme(Cordon cordon, std::vector<TollPeriod> periods, bool once_per_day = true,
                                    TollDirection direction = TollDirection::both);
    /// Per-link scheme; `links` must be valid indices of the network.
    static TollScheme link_scheme(const Network& net, std::vector<LinkIndex> links, std::vector<TollPeriod> periods,
                                  bool once_per_day = false);

    TollKind kind() const { return kind_; }
    const std::optional<Cordon>& cordon() const { return cordon_; }
    const std::vector<TollPeriod>& periods() const { return periods_; }
    bool once_per_day() const { return once_per_day_; }
    TollDirection direction() const { return direction_; }
    ModeSet charged_modes() const { return charged_modes_; }
    Seconds day_reset() const { return day_reset_; }

    void set_charged_modes(ModeSet modes) { charged_modes_ = modes; }
    /// Time of day at which the once-per-day allowance resets.
    void set_day_reset(Seconds t) { day_reset_ = t; }
    /// Replaces every period amount with `amount`, keeping the period grid.
    void override_amounts(double amount);

    /// True when entering link `l` triggers this scheme.
    bool charges_link(LinkIndex l) const { return l < chargeable_.size() && chargeable_[l]; }
    std::size_t chargeable_link_count() const { return chargeable_count_; }

    /// Amount of the period containing t mod 24 h.
    double rate_at(Seconds t) const;
    double max_rate() const;

private:
    TollScheme() = default;
    void finish(std::size_t link_count);

    TollKind kind_ = TollKind::cordon;
    std::optional<Cordon> cordon_;
    std::vector<LinkIndex> tolled_links_;
    std::vector<TollPeriod> periods_;
    bool once_per_day_ = true;
    TollDirection direction_ = TollDirection::both;
    ModeSet charged_modes_{Mode::car};
    Seconds day_reset_ = 3 * kSecondsPerHour;
    std::vector<bool> chargeable_;
    std::size_t chargeable_count_ = 0;
};

/// Per-person record of the last charged day, owned by one mobsim run.
class ChargeHistory {
public:
    bool charged_on(std::size_t person, long day) const;
    void record(std::size_t person, long day) { last_day_[person] = day; }

private:
    std::unordered_map<std::size_t, long> last_day_;
};

struct Charger {
    std::size_t person = 0;
    bool toll_exempt = false;
    Mode mode = Mode::car;
};

/// Dollars to charge for entering `link` at `t` (0 when nothing is due).
/// Records the charge in `history`.
double on_link_enter(const TollScheme& scheme, const Charger& who, LinkIndex link, Seconds t,
                     ChargeHistory& history);

/// Base-plan preset: $9 from 06:00 to 20:00, $7 from 20:00 to 22:00, $5
/// overnight; charged once per day on entering or leaving.
std::vector<TollPeriod> nyc_cbd_base_periods();
inline constexpr std::string_view kNycCbdBasePreset = "nyc-cbd-base";

std::string_view to_string(TollDirection d);
TollDirection parse_direction(std::string_view text);

/// Builds a scheme from the config "toll" section; null or
/// {"enabled": false} yields none.
std::optional<TollScheme> toll_scheme_from_json(const nlohmann::json& section, const Network& net);

}  // namespace tollsim
