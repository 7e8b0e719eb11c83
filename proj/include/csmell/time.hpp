#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

// Calendar math and timestamp parsing. All instants are UTC epoch seconds;
// zone offsets are applied at parse time and retained separately by callers
// that need local wall-clock time (the sponsored-developer rule).

namespace csmell {

using Instant = std::int64_t; // seconds since 1970-01-01T00:00:00Z

constexpr std::int64_t kSecondsPerDay = 86400;

// Days since the epoch for a proleptic Gregorian civil date.
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
    unsigned month; // 1..12
    unsigned day;   // 1..31
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

// 0 = Monday ... 6 = Sunday (1970-01-01 was a Thursday).
constexpr int weekday_mon0(std::int64_t days) {
    return static_cast<int>(((days % 7) + 7 + 3) % 7);
}

inline std::string format_utc(Instant t) {
    std::int64_t days = t / kSecondsPerDay;
    std::int64_t sec = t % kSecondsPerDay;
    if (sec < 0) {
        sec += kSecondsPerDay;
        days -= 1;
    }
    const CivilDate cd = civil_from_days(days);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(cd.year), cd.month, cd.day,
                  static_cast<long long>(sec / 3600),
                  static_cast<long long>((sec / 60) % 60),
                  static_cast<long long>(sec % 60));
    return buf;
}

namespace detail {

inline bool read_uint(std::string_view s, std::size_t& pos, int digits, int& out) {
    if (pos + digits > s.size()) return false;
    int v = 0;
    for (int i = 0; i < digits; ++i) {
        const char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    pos += digits;
    out = v;
    return true;
}

} // namespace detail

// Parses "YYYY-MM-DD[Thh:mm:ss[.fff]][Z|+hh:mm|-hh:mm|+hhmm]"; a missing zone
// designator means UTC. Fractional seconds are truncated.
inline std::optional<Instant> parse_iso8601(std::string_view s) {
    std::size_t p = 0;
    int year = 0, mon = 0, day = 0, hh = 0, mm = 0, ss = 0;
    if (!detail::read_uint(s, p, 4, year)) return std::nullopt;
    if (p >= s.size() || s[p] != '-') return std::nullopt;
    ++p;
    if (!detail::read_uint(s, p, 2, mon)) return std::nullopt;
    if (p >= s.size() || s[p] != '-') return std::nullopt;
    ++p;
    if (!detail::read_uint(s, p, 2, day)) return std::nullopt;
    if (mon < 1 || mon > 12 || day < 1 || day > 31) return std::nullopt;
    if (p < s.size() && (s[p] == 'T' || s[p] == ' ' || s[p] == 't')) {
        ++p;
        if (!detail::read_uint(s, p, 2, hh)) return std::nullopt;
        if (p >= s.size() || s[p] != ':') return std::nullopt;
        ++p;
        if (!detail::read_uint(s, p, 2, mm)) return std::nullopt;
        if (p < s.size() && s[p] == ':') {
            ++p;
            if (!detail::read_uint(s, p, 2, ss)) return std::nullopt;
        }
        if (p < s.size() && s[p] == '.') {
            ++p;
            while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
        }
        if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
    }
    std::int64_t offset_sec = 0;
    if (p < s.size()) {
        const char c = s[p];
        if (c == 'Z' || c == 'z') {
            ++p;
        } else if (c == '+' || c == '-') {
            const int sign = (c == '-') ? -1 : 1;
            ++p;
            int oh = 0, om = 0;
            if (!detail::read_uint(s, p, 2, oh)) return std::nullopt;
            if (p < s.size() && s[p] == ':') ++p;
            if (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) {
                if (!detail::read_uint(s, p, 2, om)) return std::nullopt;
            }
            offset_sec = sign * (oh * 3600 + om * 60);
        }
    }
    if (p != s.size()) return std::nullopt;
    const std::int64_t days = days_from_civil(year, static_cast<unsigned>(mon),
                                              static_cast<unsigned>(day));
    return days * kSecondsPerDay + hh * 3600 + mm * 60 + ss - offset_sec;
}

// Parses an RFC-2822 date header, e.g. "Tue, 5 Jan 2010 14:02:33 +0100".
// The weekday is optional, seconds are optional, and a handful of legacy
// zone names are accepted; unknown alphabetic zones are treated as UTC.
inline std::optional<Instant> parse_rfc2822(std::string_view s) {
    std::size_t p = 0;
    auto skip_ws = [&] {
        while (p < s.size() && (s[p] == ' ' || s[p] == '\t')) ++p;
    };
    skip_ws();
    const std::size_t comma = s.find(',');
    if (comma != std::string_view::npos && comma < 10) p = comma + 1;
    skip_ws();

    auto read_int = [&](int max_digits) -> std::optional<int> {
        int v = 0, n = 0;
        while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p])) && n < max_digits) {
            v = v * 10 + (s[p] - '0');
            ++p;
            ++n;
        }
        if (n == 0) return std::nullopt;
        return v;
    };

    const auto day = read_int(2);
    if (!day) return std::nullopt;
    skip_ws();
    static constexpr const char* kMonths[] = {"jan", "feb", "mar", "apr", "may", "jun",
                                              "jul", "aug", "sep", "oct", "nov", "dec"};
    if (p + 3 > s.size()) return std::nullopt;
    int month = 0;
    for (int i = 0; i < 12; ++i) {
        if (std::tolower(static_cast<unsigned char>(s[p])) == kMonths[i][0] &&
            std::tolower(static_cast<unsigned char>(s[p + 1])) == kMonths[i][1] &&
            std::tolower(static_cast<unsigned char>(s[p + 2])) == kMonths[i][2]) {
            month = i + 1;
            break;
        }
    }
    if (month == 0) return std::nullopt;
    p += 3;
    skip_ws();
    auto year = read_int(4);
    if (!year) return std::nullopt;
    if (*year < 100) *year += (*year < 50) ? 2000 : 1900; // two-digit years per RFC
    skip_ws();
    const auto hh = read_int(2);
    if (!hh || p >= s.size() || s[p] != ':') return std::nullopt;
    ++p;
    const auto mm = read_int(2);
    if (!mm) return std::nullopt;
    int ss = 0;
    if (p < s.size() && s[p] == ':') {
        ++p;
        const auto v = read_int(2);
        if (!v) return std::nullopt;
        ss = *v;
    }
    skip_ws();
    std::int64_t offset_sec = 0;
    if (p < s.size()) {
        if (s[p] == '+' || s[p] == '-') {
            const int sign = (s[p] == '-') ? -1 : 1;
            ++p;
            const auto v = read_int(4);
            if (!v) return std::nullopt;
            offset_sec = sign * ((*v / 100) * 3600 + (*v % 100) * 60);
        } else {
            std::string zone;
            while (p < s.size() && std::isalpha(static_cast<unsigned char>(s[p])))
                zone += static_cast<char>(std::toupper(static_cast<unsigned char>(s[p++])));
            struct Zone { const char* name; int minutes; };
            static constexpr Zone kZones[] = {{"UT", 0},    {"GMT", 0},   {"UTC", 0},
                                              {"EST", -300}, {"EDT", -240}, {"CST", -360},
                                              {"CDT", -300}, {"MST", -420}, {"MDT", -360},
                                              {"PST", -480}, {"PDT", -420}};
            for (const auto& z : kZones)
                if (zone == z.name) offset_sec = z.minutes * 60;
        }
    }
    const std::int64_t days = days_from_civil(*year, static_cast<unsigned>(month),
                                              static_cast<unsigned>(*day));
    return days * kSecondsPerDay + *hh * 3600 + *mm * 60 + ss - offset_sec;
}

} // namespace csmell
