#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace rfmseg {

/// Exact fixed-point GBP amount stored as an integer count of micro-pounds.
///
/// Ledger unit prices carry up to three decimals (e.g. 0.001), so sums are
/// kept at 1e-6 resolution and only rounded when printed.
class Money {
public:
    static constexpr std::int64_t kScale = 1'000'000;

    constexpr Money() = default;

    static constexpr Money from_micros(std::int64_t micros) { return Money(micros); }
    static constexpr Money from_cents(std::int64_t cents) { return Money(cents * (kScale / 100)); }

    /// Parses "[-]digits[.digits]". More than six fractional digits are
    /// rounded half away from zero. Throws std::invalid_argument.
    static Money parse(std::string_view text, char decimal_separator = '.');

    constexpr std::int64_t micros() const { return micros_; }
    double to_double() const { return static_cast<double>(micros_) / kScale; }

    /// Rounded to `decimals` places (half away from zero), e.g. "139.12".
    std::string to_string(int decimals = 2) const;
    /// Shortest exact representation, e.g. "2.55", "0.001", "6".
    std::string to_exact_string(char decimal_separator = '.') const;

    constexpr Money& operator+=(Money other) {
        micros_ += other.micros_;
        return *this;
    }
    friend constexpr Money operator+(Money a, Money b) { return Money(a.micros_ + b.micros_); }
    friend constexpr Money operator-(Money a, Money b) { return Money(a.micros_ - b.micros_); }
    friend constexpr Money operator*(Money a, std::int64_t quantity) { return Money(a.micros_ * quantity); }
    friend constexpr Money operator*(std::int64_t quantity, Money a) { return a * quantity; }
    friend constexpr auto operator<=>(Money, Money) = default;

private:
    constexpr explicit Money(std::int64_t micros) : micros_(micros) {}
    std::int64_t micros_ = 0;
};

}  // namespace rfmseg
