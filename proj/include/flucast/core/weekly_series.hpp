#pragma once

#include "flucast/core/week.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace flucast::core {

/**
 * @brief Real-valued series indexed by ISO week.
 *
 * Weeks are strictly increasing and contiguous. The only permitted gap is
 * the off-season break between the end of one surveillance season (W17) and
 * the start of the next (W42), so several seasons can live on one lag
 * timeline. Any other gap is rejected at construction; callers fill missing
 * volume weeks with zeros before building a series.
 */
class WeeklySeries {
public:
    /// Contiguous series starting at `start`. Requires at least one value.
    WeeklySeries(WeekId start, std::vector<double> values);
    /// Validates the timeline rule above. Requires at least one week.
    WeeklySeries(std::vector<WeekId> weeks, std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<WeekId>& weeks() const noexcept { return weeks_; }
    const std::vector<double>& values() const noexcept { return values_; }
    WeekId week_at(std::size_t i) const { return weeks_.at(i); }
    double value_at(std::size_t i) const { return values_.at(i); }
    WeekId first_week() const { return weeks_.front(); }
    WeekId last_week() const { return weeks_.back(); }

    std::optional<std::size_t> index_of(WeekId w) const;
    bool contains(WeekId w) const { return index_of(w).has_value(); }
    /// Throws DataError if `w` is not in the series.
    double at(WeekId w) const;

    /// Inclusive sub-range [from, to]; throws DataError when it would be empty.
    WeeklySeries slice(WeekId from, WeekId to) const;
    /// Same weeks, replaced values (length must match).
    WeeklySeries with_values(std::vector<double> values) const;

    friend bool operator==(const WeeklySeries&, const WeeklySeries&) = default;

private:
    std::vector<WeekId> weeks_;
    std::vector<double> values_;
};

/// Restricts both series to their common weeks. Throws DataError if disjoint.
std::pair<WeeklySeries, WeeklySeries> align(const WeeklySeries& a, const WeeklySeries& b);

/// Weeks whose value strictly exceeds `threshold`, in series order.
std::vector<WeekId> on_season_weeks(const WeeklySeries& ili, double threshold);

/// Pointwise sum of series sharing one week index.
WeeklySeries sum_series(std::span<const WeeklySeries> parts);

} // namespace flucast::core
