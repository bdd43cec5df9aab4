#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

namespace dclc {

// Calendar month stored as months since January of year 0.
struct Month {
    int value = 0;

    static constexpr Month of(int year, int month) { return Month{year * 12 + (month - 1)}; }

    constexpr int year() const { return value / 12; }
    constexpr int month_of_year() const { return value % 12 + 1; }
    constexpr double as_years() const { return static_cast<double>(value) / 12.0; }

    constexpr Month operator+(int months) const { return Month{value + months}; }
    constexpr int operator-(Month other) const { return value - other.value; }
    constexpr auto operator<=>(const Month&) const = default;

    // "YYYY-MM"
    std::string str() const;
    static Month parse(const std::string& text);
};

// USD amounts that must add up exactly are carried as integer cents.
using Cents = std::int64_t;

inline Cents to_cents(double usd) { return static_cast<Cents>(std::llround(usd * 100.0)); }
inline double to_usd(Cents cents) { return static_cast<double>(cents) / 100.0; }

// Fixed-point rendering used by every report table ("-12.34").
std::string format_cents(Cents cents);
std::string format_fixed(double value, int decimals);

constexpr double kHoursPerYear = 8760.0;

}  // namespace dclc
