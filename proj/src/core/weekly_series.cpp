#include "flucast/core/weekly_series.hpp"

#include "flucast/core/error.hpp"

#include <algorithm>

namespace flucast::core {

WeeklySeries::WeeklySeries(WeekId start, std::vector<double> values)
    : values_(std::move(values)) {
    if (values_.empty()) {
        throw DataError("weekly series needs at least one value");
    }
    weeks_.reserve(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
        weeks_.push_back(add_weeks(start, static_cast<std::int64_t>(i)));
    }
}

WeeklySeries::WeeklySeries(std::vector<WeekId> weeks, std::vector<double> values)
    : weeks_(std::move(weeks)), values_(std::move(values)) {
    if (weeks_.empty()) {
        throw DataError("weekly series needs at least one value");
    }
    if (weeks_.size() != values_.size()) {
        throw DataError("weekly series: week and value counts differ");
    }
    for (std::size_t i = 1; i < weeks_.size(); ++i) {
        if (!is_timeline_successor(weeks_[i - 1], weeks_[i])) {
            throw DataError("weekly series gap between " + weeks_[i - 1].to_string() + " and " +
                            weeks_[i].to_string());
        }
    }
}

std::optional<std::size_t> WeeklySeries::index_of(WeekId w) const {
    auto it = std::lower_bound(weeks_.begin(), weeks_.end(), w);
    if (it == weeks_.end() || *it != w) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - weeks_.begin());
}

double WeeklySeries::at(WeekId w) const {
    auto i = index_of(w);
    if (!i) {
        throw DataError("week " + w.to_string() + " not in series");
    }
    return values_[*i];
}

WeeklySeries WeeklySeries::slice(WeekId from, WeekId to) const {
    auto lo = std::lower_bound(weeks_.begin(), weeks_.end(), from);
    auto hi = std::upper_bound(weeks_.begin(), weeks_.end(), to);
    if (lo >= hi) {
        throw DataError("empty slice " + from.to_string() + ".." + to.to_string());
    }
    const auto b = lo - weeks_.begin();
    const auto e = hi - weeks_.begin();
    return WeeklySeries(std::vector<WeekId>(lo, hi),
                        std::vector<double>(values_.begin() + b, values_.begin() + e));
}

WeeklySeries WeeklySeries::with_values(std::vector<double> values) const {
    return WeeklySeries(weeks_, std::move(values));
}

std::pair<WeeklySeries, WeeklySeries> align(const WeeklySeries& a, const WeeklySeries& b) {
    const WeekId lo = std::max(a.first_week(), b.first_week());
    const WeekId hi = std::min(a.last_week(), b.last_week());
    if (hi < lo) {
        throw DataError("series do not overlap");
    }
    auto as = a.slice(lo, hi);
    auto bs = b.slice(lo, hi);
    if (as.weeks() != bs.weeks()) {
        throw DataError("series share a week range but not a week index");
    }
    return {std::move(as), std::move(bs)};
}

std::vector<WeekId> on_season_weeks(const WeeklySeries& ili, double threshold) {
    if (threshold < 0.0) {
        throw ConfigError("on-season threshold must be non-negative");
    }
    std::vector<WeekId> out;
    for (std::size_t i = 0; i < ili.size(); ++i) {
        if (ili.value_at(i) > threshold) {
            out.push_back(ili.week_at(i));
        }
    }
    return out;
}

WeeklySeries sum_series(std::span<const WeeklySeries> parts) {
    if (parts.empty()) {
        throw DataError("sum of zero series");
    }
    std::vector<double> acc = parts.front().values();
    for (std::size_t p = 1; p < parts.size(); ++p) {
        if (parts[p].weeks() != parts.front().weeks()) {
            throw DataError("cannot sum series with different week indices");
        }
        for (std::size_t i = 0; i < acc.size(); ++i) {
            acc[i] += parts[p].value_at(i);
        }
    }
    return parts.front().with_values(std::move(acc));
}

} // namespace flucast::core
