#pragma once

#include "flucast/core/transaction_log.hpp"
#include "flucast/core/week.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace flucast::discovery {

struct ScoredBasket {
    core::Basket items;
    double correlation = 0.0;

    friend bool operator==(const ScoredBasket&, const ScoredBasket&) = default;
};

/// Inclusive window [first, last] around an epidemic peak.
struct PeakWindow {
    core::WeekId peak;
    core::WeekId first;
    core::WeekId last;

    bool contains(core::WeekId w) const { return w >= first && w <= last; }
    friend bool operator==(const PeakWindow&, const PeakWindow&) = default;
};

/**
 * @brief Ranked sentinel baskets learned from one season.
 *
 * Baskets are ordered by correlation, highest first. `truncated` is set when
 * fewer baskets than requested were available.
 */
struct SentinelSet {
    std::vector<ScoredBasket> baskets;
    core::Season source_season{2000};
    PeakWindow window{{2001, 1}, {2001, 1}, {2001, 1}};
    bool truncated = false;

    /// First `n` baskets (all of them when fewer exist).
    std::vector<core::Basket> top(std::size_t n) const;

    friend bool operator==(const SentinelSet&, const SentinelSet&) = default;
};

nlohmann::json to_json(const SentinelSet& s);
SentinelSet sentinel_set_from_json(const nlohmann::json& j);

} // namespace flucast::discovery
