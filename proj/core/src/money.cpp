#include "rfmseg/money.hpp"

#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace rfmseg {

namespace {

constexpr std::int64_t kMaxWhole = std::numeric_limits<std::int64_t>::max() / Money::kScale - 1;

bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

Money Money::parse(std::string_view text, char decimal_separator) {
    const std::string original(text);
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    if (text.empty()) throw std::invalid_argument("empty decimal value");

    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }

    std::int64_t whole = 0;
    std::size_t pos = 0;
    bool any_digit = false;
    for (; pos < text.size() && is_digit(text[pos]); ++pos) {
        whole = whole * 10 + (text[pos] - '0');
        any_digit = true;
        if (whole > kMaxWhole) throw std::invalid_argument("decimal value out of range: '" + original + "'");
    }

    std::int64_t frac = 0;
    if (pos < text.size() && text[pos] == decimal_separator) {
        ++pos;
        std::int64_t unit = kScale / 10;
        bool round_up = false;
        bool first_dropped = true;
        for (; pos < text.size() && is_digit(text[pos]); ++pos) {
            any_digit = true;
            const int digit = text[pos] - '0';
            if (unit > 0) {
                frac += digit * unit;
                unit /= 10;
            } else if (first_dropped) {
                round_up = digit >= 5;
                first_dropped = false;
            }
        }
        if (round_up) ++frac;
    }
    if (!any_digit || pos != text.size()) {
        throw std::invalid_argument("not a decimal value: '" + original + "'");
    }

    const std::int64_t micros = whole * kScale + frac;
    return Money(negative ? -micros : micros);
}

std::string Money::to_string(int decimals) const {
    if (decimals < 0 || decimals > 6) throw std::invalid_argument("decimals must be in [0, 6]");
    std::int64_t step = 1;
    for (int i = decimals; i < 6; ++i) step *= 10;

    const bool negative = micros_ < 0;
    const std::int64_t magnitude = negative ? -micros_ : micros_;
    const std::int64_t rounded = (magnitude + step / 2) / step;

    std::int64_t denom = 1;
    for (int i = 0; i < decimals; ++i) denom *= 10;
    std::string out = (negative && rounded != 0) ? "-" : "";
    out += std::to_string(rounded / denom);
    if (decimals > 0) {
        std::string frac = std::to_string(rounded % denom);
        out += '.';
        out.append(static_cast<std::size_t>(decimals) - frac.size(), '0');
        out += frac;
    }
    return out;
}

std::string Money::to_exact_string(char decimal_separator) const {
    const bool negative = micros_ < 0;
    const std::int64_t magnitude = negative ? -micros_ : micros_;
    std::string out = negative ? "-" : "";
    out += std::to_string(magnitude / kScale);
    std::int64_t frac = magnitude % kScale;
    if (frac != 0) {
        std::string digits = std::to_string(frac);
        digits.insert(0, 6 - digits.size(), '0');
        while (!digits.empty() && digits.back() == '0') digits.pop_back();
        out += decimal_separator;
        out += digits;
    }
    return out;
}

}  // namespace rfmseg
