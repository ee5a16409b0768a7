#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tollsim {

/// Seconds since midnight of the simulated day. Times past 24 h are allowed
/// up to the 30 h horizon.
using Seconds = double;

inline constexpr int kSecondsPerHour = 3600;
inline constexpr int kSecondsPerDay = 24 * kSecondsPerHour;
inline constexpr int kHorizon = 30 * kSecondsPerHour;

inline constexpr double kWalkSpeed = 1.34;  // m/s
inline constexpr double kBikeSpeed = 4.17;  // m/s

enum class Mode : std::uint8_t { car, pt, walk, bike };

inline constexpr Mode kAllModes[] = {Mode::car, Mode::pt, Mode::walk, Mode::bike};

std::string_view to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view text);

/// Small bitset over Mode.
class ModeSet {
public:
    constexpr ModeSet() = default;
    constexpr ModeSet(std::initializer_list<Mode> modes)
    {
        for (auto m : modes)
            insert(m);
    }

    constexpr void insert(Mode m) { bits_ |= bit(m); }
    constexpr bool contains(Mode m) const { return (bits_ & bit(m)) != 0; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr std::uint8_t bits() const { return bits_; }

    friend constexpr bool operator==(ModeSet, ModeSet) = default;

private:
    static constexpr std::uint8_t bit(Mode m) { return std::uint8_t(1u << static_cast<unsigned>(m)); }
    std::uint8_t bits_ = 0;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file; the message carries the line or record locus.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Input parsed but violates a data-model invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

class RoutingError : public Error {
public:
    using Error::Error;
};

class SimulationError : public Error {
public:
    using Error::Error;
};

class ScoringError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Formats seconds as HH:MM:SS (hours may exceed 23).
std::string format_clock(Seconds t);

}  // namespace tollsim
