#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "vegout/common.hpp"

namespace vegout::timeutil {

/// Seconds since 1970-01-01T00:00:00Z.
using UnixSeconds = std::int64_t;
/// Whole hours since 1970-01-01T00Z. Every hourly index in the toolkit uses this.
using HourIndex = std::int64_t;

inline constexpr HourIndex floor_hour(UnixSeconds s) noexcept {
    return s >= 0 ? s / 3600 : (s - 3599) / 3600;
}

/// Days since epoch for a proleptic Gregorian date.
std::int64_t days_from_civil(int year, unsigned month, unsigned day) noexcept;

struct Civil {
    int year;
    unsigned month;
    unsigned day;
    unsigned hour;
};

Civil civil_from_hour(HourIndex h) noexcept;
HourIndex hour_from_civil(int year, unsigned month, unsigned day, unsigned hour) noexcept;

unsigned days_in_month(int year, unsigned month) noexcept;

/// Hour index of the first hour of the given month.
inline HourIndex month_start(YearMonth ym) noexcept {
    return hour_from_civil(ym.year, static_cast<unsigned>(ym.month), 1, 0);
}

inline YearMonth month_of(HourIndex h) noexcept {
    const Civil c = civil_from_hour(h);
    return {c.year, static_cast<int>(c.month)};
}

/// Fixed offset from UTC in minutes. Parsed from "UTC", "Z", "+HH:MM", "-HH:MM",
/// "UTC+5", "UTC-05:00".
int parse_utc_offset(std::string_view text);

/// Parses an ISO-8601 timestamp ("YYYY-MM-DD", "YYYY-MM-DDTHH", "YYYY-MM-DDTHH:MM",
/// "YYYY-MM-DDTHH:MM:SS", space separator accepted). An explicit trailing "Z" or
/// "+HH:MM" wins; otherwise `default_offset_minutes` converts local time to UTC.
/// Throws std::invalid_argument on malformed input.
UnixSeconds parse_iso8601(std::string_view text, int default_offset_minutes = 0);

/// "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(UnixSeconds s);

}  // namespace vegout::timeutil
