#include "rfmseg/timestamp.hpp"

#include <chrono>
#include <cstdio>
#include <stdexcept>

namespace rfmseg {

namespace {

namespace chr = std::chrono;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

chr::year_month_day civil(std::int64_t day_number) {
    return chr::year_month_day{chr::sys_days{chr::days{day_number}}};
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

Timestamp Timestamp::from_civil(int year, unsigned month, unsigned day, unsigned hour, unsigned minute) {
    const chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
    if (!ymd.ok() || hour > 23 || minute > 59) {
        throw std::invalid_argument("invalid calendar date/time");
    }
    const auto days = chr::sys_days{ymd}.time_since_epoch().count();
    return Timestamp(static_cast<std::int64_t>(days) * 1440 + hour * 60 + minute);
}

std::int64_t Timestamp::day_number() const { return floor_div(minutes_, 1440); }

int Timestamp::year() const { return static_cast<int>(civil(day_number()).year()); }
unsigned Timestamp::month() const { return static_cast<unsigned>(civil(day_number()).month()); }
unsigned Timestamp::day() const { return static_cast<unsigned>(civil(day_number()).day()); }
unsigned Timestamp::hour() const { return static_cast<unsigned>((minutes_ - day_number() * 1440) / 60); }
unsigned Timestamp::minute() const { return static_cast<unsigned>((minutes_ - day_number() * 1440) % 60); }

std::string Timestamp::iso() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02u:%02u", year(), month(), day(), hour(), minute());
    return buf;
}

DatePattern::DatePattern(std::string pattern) : pattern_(std::move(pattern)) {
    bool has_y = false, has_m = false, has_d = false;
    for (std::size_t i = 0; i < pattern_.size(); ++i) {
        if (pattern_[i] != '%') continue;
        if (i + 1 >= pattern_.size()) throw std::invalid_argument("date pattern ends with '%'");
        switch (pattern_[++i]) {
            case 'Y': has_y = true; break;
            case 'm': has_m = true; break;
            case 'd': has_d = true; break;
            case 'H': case 'M': case 'S': case '%': break;
            default:
                throw std::invalid_argument(std::string("unsupported date directive %") + pattern_[i]);
        }
    }
    if (!has_y || !has_m || !has_d) {
        throw std::invalid_argument("date pattern needs %Y, %m and %d: '" + pattern_ + "'");
    }
}

Timestamp DatePattern::parse(std::string_view text) const {
    const auto fail = [&] {
        return std::invalid_argument("unparseable date '" + std::string(text) + "' for pattern '" + pattern_ + "'");
    };
    int year = 0;
    unsigned month = 0, day = 0, hour = 0, minute = 0;
    std::size_t pos = 0;

    const auto read_number = [&](std::size_t min_digits, std::size_t max_digits) {
        std::size_t start = pos;
        unsigned value = 0;
        while (pos < text.size() && pos - start < max_digits && is_digit(text[pos])) {
            value = value * 10 + static_cast<unsigned>(text[pos] - '0');
            ++pos;
        }
        if (pos - start < min_digits) throw fail();
        return value;
    };

    for (std::size_t i = 0; i < pattern_.size(); ++i) {
        const char p = pattern_[i];
        if (p == '%') {
            const char directive = pattern_[++i];
            switch (directive) {
                case 'Y': year = static_cast<int>(read_number(4, 4)); break;
                case 'm': month = read_number(1, 2); break;
                case 'd': day = read_number(1, 2); break;
                case 'H': hour = read_number(1, 2); break;
                case 'M': minute = read_number(1, 2); break;
                case 'S': {
                    const unsigned seconds = read_number(1, 2);
                    if (seconds > 59) throw fail();
                    break;
                }
                case '%':
                    if (pos >= text.size() || text[pos] != '%') throw fail();
                    ++pos;
                    break;
            }
        } else {
            if (pos >= text.size() || text[pos] != p) throw fail();
            ++pos;
        }
    }
    if (pos != text.size()) throw fail();
    try {
        return Timestamp::from_civil(year, month, day, hour, minute);
    } catch (const std::invalid_argument&) {
        throw fail();
    }
}

std::string DatePattern::format(Timestamp ts) const {
    std::string out;
    char buf[16];
    for (std::size_t i = 0; i < pattern_.size(); ++i) {
        if (pattern_[i] != '%') {
            out += pattern_[i];
            continue;
        }
        switch (pattern_[++i]) {
            case 'Y': std::snprintf(buf, sizeof buf, "%04d", ts.year()); break;
            case 'm': std::snprintf(buf, sizeof buf, "%u", ts.month()); break;
            case 'd': std::snprintf(buf, sizeof buf, "%u", ts.day()); break;
            case 'H': std::snprintf(buf, sizeof buf, "%u", ts.hour()); break;
            case 'M': std::snprintf(buf, sizeof buf, "%02u", ts.minute()); break;
            case 'S': std::snprintf(buf, sizeof buf, "00"); break;
            default: std::snprintf(buf, sizeof buf, "%%"); break;
        }
        out += buf;
    }
    return out;
}

}  // namespace rfmseg
