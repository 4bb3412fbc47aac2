#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace rfmseg {

/// Civil date-time at minute precision, stored as minutes since 1970-01-01 00:00.
class Timestamp {
public:
    constexpr Timestamp() = default;

    static Timestamp from_civil(int year, unsigned month, unsigned day, unsigned hour = 0, unsigned minute = 0);
    static constexpr Timestamp from_minutes(std::int64_t minutes) { return Timestamp(minutes); }

    constexpr std::int64_t minutes() const { return minutes_; }
    /// Days since the epoch (floor), i.e. the calendar date.
    std::int64_t day_number() const;
    Timestamp truncated_to_date() const { return Timestamp(day_number() * 1440); }

    int year() const;
    unsigned month() const;
    unsigned day() const;
    unsigned hour() const;
    unsigned minute() const;

    /// ISO-8601 "YYYY-MM-DD HH:MM".
    std::string iso() const;

    friend constexpr auto operator<=>(Timestamp, Timestamp) = default;

private:
    constexpr explicit Timestamp(std::int64_t minutes) : minutes_(minutes) {}
    std::int64_t minutes_ = 0;
};

/// strftime-like date pattern supporting %Y %m %d %H %M %S and literal text.
/// Numeric fields other than %Y accept one or two digits; seconds are
/// accepted on parse and discarded.
class DatePattern {
public:
    static constexpr std::string_view kDefault = "%m/%d/%Y %H:%M";

    DatePattern() : DatePattern(std::string(kDefault)) {}
    explicit DatePattern(std::string pattern);

    const std::string& pattern() const { return pattern_; }

    /// Throws std::invalid_argument naming the offending value.
    Timestamp parse(std::string_view text) const;
    /// Month, day and hour unpadded; minutes and seconds two digits.
    std::string format(Timestamp ts) const;

private:
    std::string pattern_;
};

}  // namespace rfmseg
