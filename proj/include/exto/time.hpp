#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "exto/errors.hpp"

namespace exto {

/// Timestamps are UTC (or declared fixed-offset market-local) epoch seconds.
/// All calendar math happens here, at the edges; the rest of the library
/// works in grid indices.
using Timestamp = std::int64_t;
/// Step/aggregation durations in seconds.
using Duration = std::int64_t;

constexpr Duration minutes(std::int64_t m) { return m * 60; }
constexpr Duration hours(std::int64_t h) { return h * 3600; }

namespace detail {

// Days since 1970-01-01 for a proleptic Gregorian civil date.
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
    std::int64_t year;
    unsigned month;
    unsigned day;
};

constexpr CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {y + (m <= 2), m, d};
}

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace detail

constexpr Timestamp timestamp_from_civil(std::int64_t year, unsigned month,
                                         unsigned day, unsigned hour = 0,
                                         unsigned minute = 0,
                                         unsigned second = 0) {
    return detail::days_from_civil(year, month, day) * 86400 + hour * 3600 +
           minute * 60 + second;
}

/// Parses ISO-8601 ("2014-07-01", "2014-07-01T12:30:00", "2014-07-01 12:30",
/// optional Z or ±HH:MM offset) or a bare integer of epoch seconds.
inline Timestamp parse_timestamp(std::string_view s) {
    if (detail::all_digits(s) || (s.size() > 1 && s[0] == '-' &&
                                  detail::all_digits(s.substr(1)))) {
        return std::stoll(std::string(s));
    }
    int year = 0, month = 0, day = 0, hh = 0, mm = 0, ss = 0;
    int off_sign = 0, off_h = 0, off_m = 0;
    const std::string str(s);
    const char* p = str.c_str();
    int consumed = 0;
    if (std::sscanf(p, "%d-%d-%d%n", &year, &month, &day, &consumed) != 3)
        throw data_error("unparseable timestamp: '" + str + "'");
    p += consumed;
    if (*p == 'T' || *p == ' ') {
        ++p;
        if (std::sscanf(p, "%d:%d%n", &hh, &mm, &consumed) != 2)
            throw data_error("unparseable timestamp: '" + str + "'");
        p += consumed;
        if (*p == ':') {
            ++p;
            if (std::sscanf(p, "%d%n", &ss, &consumed) != 1)
                throw data_error("unparseable timestamp: '" + str + "'");
            p += consumed;
        }
    }
    if (*p == 'Z') {
        ++p;
    } else if (*p == '+' || *p == '-') {
        off_sign = (*p == '+') ? 1 : -1;
        ++p;
        if (std::sscanf(p, "%d:%d%n", &off_h, &off_m, &consumed) != 2)
            throw data_error("unparseable timestamp offset: '" + str + "'");
        p += consumed;
    }
    if (*p != '\0')
        throw data_error("trailing characters in timestamp: '" + str + "'");
    if (month < 1 || month > 12 || day < 1 || day > 31 || hh > 23 || mm > 59 ||
        ss > 60)
        throw data_error("timestamp field out of range: '" + str + "'");
    Timestamp t = timestamp_from_civil(year, static_cast<unsigned>(month),
                                       static_cast<unsigned>(day),
                                       static_cast<unsigned>(hh),
                                       static_cast<unsigned>(mm),
                                       static_cast<unsigned>(ss));
    t -= off_sign * (off_h * 3600 + off_m * 60);
    return t;
}

inline std::string format_timestamp(Timestamp t) {
    std::int64_t days = t / 86400;
    std::int64_t sod = t % 86400;
    if (sod < 0) {
        sod += 86400;
        --days;
    }
    const auto cd = detail::civil_from_days(days);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lld",
                  static_cast<long long>(cd.year), cd.month, cd.day,
                  static_cast<long long>(sod / 3600),
                  static_cast<long long>((sod / 60) % 60),
                  static_cast<long long>(sod % 60));
    return buf;
}

/// Calendar quarter, used by cap-product settlement.
struct Quarter {
    int year;
    int index; // 1..4

    Timestamp start() const {
        return timestamp_from_civil(year, static_cast<unsigned>(1 + 3 * (index - 1)), 1);
    }
    Timestamp end() const {
        return index == 4 ? timestamp_from_civil(year + 1, 1, 1)
                          : timestamp_from_civil(year, static_cast<unsigned>(1 + 3 * index), 1);
    }
};

} // namespace exto
