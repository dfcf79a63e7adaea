#include "flucast/core/week.hpp"

#include "flucast/core/error.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace flucast::core {

namespace {

using std::chrono::days;
using std::chrono::sys_days;

// 1970-01-05 is the first Monday after the epoch; serial weeks count from it.
constexpr std::int64_t kEpochMondayOffset = 4;

sys_days week_one_monday(int year) {
    const sys_days jan4 = std::chrono::year{year} / std::chrono::January / 4;
    const unsigned iso_wd = std::chrono::weekday{jan4}.iso_encoding();
    return jan4 - days{iso_wd - 1};
}

bool year_in_range(int year) {
    return year >= WeekId::kMinYear && year <= WeekId::kMaxYear;
}

int parse_int(const std::string& s, std::size_t from, std::size_t to) {
    int v = 0;
    const char* b = s.data() + from;
    const char* e = s.data() + to;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || ptr != e || b == e) {
        throw DataError("unknown week format: '" + s + "'");
    }
    return v;
}

} // namespace

int iso_weeks_in_year(int year) {
    if (!year_in_range(year)) {
        throw ConfigError("year out of supported range: " + std::to_string(year));
    }
    return static_cast<int>((week_one_monday(year + 1) - week_one_monday(year)).count() / 7);
}

bool is_valid_week(int year, int week) {
    return year_in_range(year) && week >= 1 && week <= iso_weeks_in_year(year);
}

WeekId::WeekId(int year, int week) : year_(year), week_(week) {
    if (!is_valid_week(year, week)) {
        throw ConfigError("invalid ISO week " + std::to_string(year) + "-W" + std::to_string(week));
    }
}

std::int64_t WeekId::serial() const {
    const auto monday = week_one_monday(year_) + days{7 * (week_ - 1)};
    return (monday.time_since_epoch().count() - kEpochMondayOffset) / 7;
}

WeekId WeekId::from_serial(std::int64_t serial) {
    const sys_days monday{days{serial * 7 + kEpochMondayOffset}};
    // The ISO year of a week is the calendar year of its Thursday.
    const std::chrono::year_month_day thursday{monday + days{3}};
    const int year = static_cast<int>(thursday.year());
    if (!year_in_range(year)) {
        throw ConfigError("week arithmetic left the supported calendar range");
    }
    const int week = static_cast<int>((monday - week_one_monday(year)).count() / 7) + 1;
    return {year, week};
}

WeekId WeekId::parse(const std::string& text) {
    const auto dash = text.find('-');
    if (dash == std::string::npos) {
        throw DataError("unknown week format: '" + text + "'");
    }
    std::size_t wpos = dash + 1;
    if (wpos < text.size() && (text[wpos] == 'W' || text[wpos] == 'w')) {
        ++wpos;
    }
    const int year = parse_int(text, 0, dash);
    const int week = parse_int(text, wpos, text.size());
    if (!is_valid_week(year, week)) {
        throw DataError("unknown week format: '" + text + "'");
    }
    return {year, week};
}

std::string WeekId::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-W%02d", year_, week_);
    return buf;
}

WeekId add_weeks(WeekId w, std::int64_t n) {
    return WeekId::from_serial(w.serial() + n);
}

std::int64_t weeks_between(WeekId from, WeekId to) {
    return to.serial() - from.serial();
}

std::vector<WeekId> week_range(WeekId first, WeekId last) {
    std::vector<WeekId> out;
    if (last < first) {
        return out;
    }
    const auto n = weeks_between(first, last) + 1;
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        out.push_back(add_weeks(first, i));
    }
    return out;
}

Season::Season(int start_year) : start_year_(start_year) {
    if (!year_in_range(start_year) || !year_in_range(start_year + 1)) {
        throw ConfigError("season start year out of range: " + std::to_string(start_year));
    }
}

std::optional<Season> Season::containing(WeekId w) {
    if (w.week() >= kStartWeek) {
        return Season(w.year());
    }
    if (w.week() <= kEndWeek) {
        return Season(w.year() - 1);
    }
    return std::nullopt;
}

Season Season::parse(const std::string& label) {
    const auto slash = label.find('/');
    if (slash == std::string::npos) {
        throw DataError("bad season label: '" + label + "'");
    }
    const int year = parse_int(label, 0, slash);
    const int tail = parse_int(label, slash + 1, label.size());
    if ((year + 1) % 100 != tail % 100) {
        throw DataError("bad season label: '" + label + "'");
    }
    return Season(year);
}

std::string Season::label() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d/%02d", start_year_, (start_year_ + 1) % 100);
    return buf;
}

std::size_t Season::length() const {
    return static_cast<std::size_t>(weeks_between(start(), end()) + 1);
}

bool is_timeline_successor(WeekId prev, WeekId next) {
    if (next.serial() == prev.serial() + 1) {
        return true;
    }
    return prev.week() == Season::kEndWeek && next.year() == prev.year() &&
           next.week() == Season::kStartWeek;
}

std::vector<WeekId> season_timeline(const std::vector<Season>& seasons) {
    std::vector<WeekId> out;
    for (std::size_t i = 0; i < seasons.size(); ++i) {
        if (i > 0 && seasons[i] != seasons[i - 1].next()) {
            throw ConfigError("seasons must be consecutive: " + seasons[i - 1].label() +
                              " then " + seasons[i].label());
        }
        auto w = seasons[i].weeks();
        out.insert(out.end(), w.begin(), w.end());
    }
    return out;
}

} // namespace flucast::core
