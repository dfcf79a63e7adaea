#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace flucast::core {

/**
 * @brief ISO 8601 week date (year, week number).
 *
 * Weeks are totally ordered by calendar time. Arithmetic goes through a
 * serial week count, so offsets are associative and invertible and
 * 53-week years are handled.
 */
class WeekId {
public:
    static constexpr int kMinYear = 1600;
    static constexpr int kMaxYear = 2400;

    /// Throws ConfigError unless 1 <= week <= iso_weeks_in_year(year).
    WeekId(int year, int week);

    int year() const noexcept { return year_; }
    int week() const noexcept { return week_; }

    /// Weeks since the Monday 1970-01-05 (negative before it).
    std::int64_t serial() const;
    static WeekId from_serial(std::int64_t serial);

    /// Parses "2015-W07" (the "W" is optional).
    static WeekId parse(const std::string& text);
    std::string to_string() const;

    friend auto operator<=>(const WeekId&, const WeekId&) = default;
    friend bool operator==(const WeekId&, const WeekId&) = default;

private:
    int year_;
    int week_;
};

/// Number of ISO weeks (52 or 53) in an ISO year.
int iso_weeks_in_year(int year);

/// True when (year, week) names an existing ISO week within the supported range.
bool is_valid_week(int year, int week);

/// ISO-correct offset; throws ConfigError if the result leaves the supported range.
WeekId add_weeks(WeekId w, std::int64_t n);

/// Signed number of weeks from `from` to `to`.
std::int64_t weeks_between(WeekId from, WeekId to);

/// Inclusive contiguous range of weeks.
std::vector<WeekId> week_range(WeekId first, WeekId last);

/**
 * @brief One influenza surveillance season: week 42 of `start_year` through
 * week 17 of the following year.
 */
class Season {
public:
    static constexpr int kStartWeek = 42;
    static constexpr int kEndWeek = 17;

    explicit Season(int start_year);

    /// The season whose surveillance window contains `w`, if any.
    static std::optional<Season> containing(WeekId w);
    /// Parses "2014/15".
    static Season parse(const std::string& label);

    int start_year() const noexcept { return start_year_; }
    WeekId start() const { return {start_year_, kStartWeek}; }
    WeekId end() const { return {start_year_ + 1, kEndWeek}; }
    std::string label() const;

    bool contains(WeekId w) const { return w >= start() && w <= end(); }
    std::vector<WeekId> weeks() const { return week_range(start(), end()); }
    std::size_t length() const;

    Season previous() const { return Season(start_year_ - 1); }
    Season next() const { return Season(start_year_ + 1); }

    friend auto operator<=>(const Season&, const Season&) = default;
    friend bool operator==(const Season&, const Season&) = default;

private:
    int start_year_;
};

/// True when `next` directly follows `prev`, either as the next calendar week
/// or as the opening week of the season after the one `prev` closes.
bool is_timeline_successor(WeekId prev, WeekId next);

/// In-season weeks of consecutive seasons, concatenated.
std::vector<WeekId> season_timeline(const std::vector<Season>& seasons);

} // namespace flucast::core
