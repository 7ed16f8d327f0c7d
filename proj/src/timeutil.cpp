#include "vegout/timeutil.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

#include <fmt/format.h>

namespace vegout {

std::string YearMonth::str() const { return fmt::format("{:04d}-{:02d}", year, month); }

YearMonth YearMonth::parse(const std::string& text) {
    int y = 0, m = 0;
    const char* b = text.data();
    const char* e = b + text.size();
    auto r1 = std::from_chars(b, e, y);
    if (r1.ec != std::errc{} || r1.ptr == e || *r1.ptr != '-')
        throw std::invalid_argument("expected YYYY-MM, got '" + text + "'");
    auto r2 = std::from_chars(r1.ptr + 1, e, m);
    if (r2.ec != std::errc{} || r2.ptr != e || m < 1 || m > 12)
        throw std::invalid_argument("expected YYYY-MM, got '" + text + "'");
    return {y, m};
}

}  // namespace vegout

namespace vegout::timeutil {

// Howard Hinnant's civil calendar algorithms.
std::int64_t days_from_civil(int year, unsigned month, unsigned day) noexcept {
    const std::int64_t y = static_cast<std::int64_t>(year) - (month <= 2 ? 1 : 0);
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (month + (month > 2 ? -3 : 9)) + 2) / 5 + day - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

namespace {

struct Ymd {
    int y;
    unsigned m;
    unsigned d;
};

Ymd civil_from_days(std::int64_t z) noexcept {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return {static_cast<int>(y + (m <= 2 ? 1 : 0)), m, d};
}

int read_int(std::string_view s, std::size_t pos, std::size_t len, std::string_view whole) {
    if (pos + len > s.size()) throw std::invalid_argument("truncated timestamp '" + std::string(whole) + "'");
    int v = 0;
    auto r = std::from_chars(s.data() + pos, s.data() + pos + len, v);
    if (r.ec != std::errc{} || r.ptr != s.data() + pos + len)
        throw std::invalid_argument("bad digits in timestamp '" + std::string(whole) + "'");
    return v;
}

}  // namespace

Civil civil_from_hour(HourIndex h) noexcept {
    const std::int64_t days = h >= 0 ? h / 24 : (h - 23) / 24;
    const auto hour = static_cast<unsigned>(h - days * 24);
    const Ymd ymd = civil_from_days(days);
    return {ymd.y, ymd.m, ymd.d, hour};
}

HourIndex hour_from_civil(int year, unsigned month, unsigned day, unsigned hour) noexcept {
    return days_from_civil(year, month, day) * 24 + hour;
}

unsigned days_in_month(int year, unsigned month) noexcept {
    static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2) {
        const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        return leap ? 29 : 28;
    }
    return kDays[month - 1];
}

int parse_utc_offset(std::string_view text) {
    std::string_view s = text;
    if (s == "Z" || s == "UTC" || s == "GMT" || s.empty()) return 0;
    if (s.starts_with("UTC") || s.starts_with("GMT")) s.remove_prefix(3);
    if (s.empty() || (s[0] != '+' && s[0] != '-'))
        throw std::invalid_argument("unsupported timezone '" + std::string(text) + "'");
    const int sign = s[0] == '-' ? -1 : 1;
    s.remove_prefix(1);
    int hours = 0, minutes = 0;
    const auto colon = s.find(':');
    if (colon != std::string_view::npos) {
        hours = read_int(s, 0, colon, text);
        minutes = read_int(s, colon + 1, s.size() - colon - 1, text);
    } else if (s.size() == 4) {
        hours = read_int(s, 0, 2, text);
        minutes = read_int(s, 2, 2, text);
    } else {
        hours = read_int(s, 0, s.size(), text);
    }
    if (hours > 14 || minutes > 59)
        throw std::invalid_argument("timezone offset out of range '" + std::string(text) + "'");
    return sign * (hours * 60 + minutes);
}

UnixSeconds parse_iso8601(std::string_view text, int default_offset_minutes) {
    std::string_view s = text;
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);

    if (s.size() < 10 || s[4] != '-' || s[7] != '-')
        throw std::invalid_argument("malformed timestamp '" + std::string(text) + "'");
    const int year = read_int(s, 0, 4, text);
    const int month = read_int(s, 5, 2, text);
    const int day = read_int(s, 8, 2, text);
    if (month < 1 || month > 12 || day < 1 ||
        day > static_cast<int>(days_in_month(year, static_cast<unsigned>(month))))
        throw std::invalid_argument("date out of range in '" + std::string(text) + "'");

    int hour = 0, minute = 0, second = 0;
    std::size_t pos = 10;
    if (pos < s.size() && (s[pos] == 'T' || s[pos] == ' ')) {
        hour = read_int(s, pos + 1, 2, text);
        pos += 3;
        if (pos < s.size() && s[pos] == ':') {
            minute = read_int(s, pos + 1, 2, text);
            pos += 3;
            if (pos < s.size() && s[pos] == ':') {
                second = read_int(s, pos + 1, 2, text);
                pos += 3;
                if (pos < s.size() && s[pos] == '.') {  // fractional seconds are dropped
                    ++pos;
                    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
                }
            }
        }
    }
    if (hour > 23 || minute > 59 || second > 60)
        throw std::invalid_argument("time out of range in '" + std::string(text) + "'");

    int offset = default_offset_minutes;
    if (pos < s.size()) offset = parse_utc_offset(s.substr(pos));

    const std::int64_t days = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
    return days * 86400 + hour * 3600 + minute * 60 + second - static_cast<std::int64_t>(offset) * 60;
}

std::string format_iso8601(UnixSeconds s) {
    const std::int64_t days = s >= 0 ? s / 86400 : (s - 86399) / 86400;
    const auto rem = static_cast<unsigned>(s - days * 86400);
    const Ymd ymd = civil_from_days(days);
    return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z", ymd.y, ymd.m, ymd.d, rem / 3600,
                       (rem / 60) % 60, rem % 60);
}

}  // namespace vegout::timeutil
