#pragma once

#include "flucast/core/transaction_log.hpp"
#include "flucast/core/weekly_series.hpp"
#include "flucast/discovery/sentinel_set.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <vector>

namespace flucast::ingest {

/**
 * @brief Parameters of the synthetic retail + ILI generator.
 *
 * Product ids are "P000".."P<n-1>" (zero padded to a common width), customer
 * ids "C00000".. and receipt ids "R<n>". Seasons run consecutively from
 * `first_season_year`. Confounders are the highest-numbered products that are
 * not planted.
 */
struct SynthConfig {
    int n_customers = 1000;
    int n_products = 200;
    int n_seasons = 4;
    int first_season_year = 2011;
    core::Basket planted_basket = {"P010", "P011", "P012"};
    double plant_strength = 1.0;
    double noise_level = 0.2;
    std::uint64_t rng_seed = 42;

    double affected_fraction = 0.1;
    int n_confounders = 3;
    /// Background shopping trips per customer-week are Poisson(noise_level * visit_scale).
    double visit_scale = 3.0;
    double mean_basket_length = 8.0;
    /// Weekly log-scale shocks on the epidemic component follow an AR(1)
    /// process with this innovation sd and coefficient.
    double ili_volatility = 0.15;
    double ili_persistence = 0.7;

    /// Throws ConfigError on an invalid configuration.
    void validate() const;
};

struct SeasonTruth {
    core::Season season;
    core::WeekId peak_week;
    double peak_value = 0.0;
    double width_weeks = 0.0;
};

struct SyntheticDataset {
    core::TransactionLog log;
    core::WeeklySeries ili;          ///< all seasons on one timeline, rates in (0, 1)
    discovery::SentinelSet planted;  ///< the planted basket scored on the first season
    std::vector<core::ProductId> confounders;
    std::vector<SeasonTruth> seasons;
};

/**
 * Deterministic synthetic dataset.
 *
 * ILI per season is a Gaussian bump over a 0.005 baseline, peak value in
 * [0.04, 0.10] and peak week drawn mid-season, perturbed by AR(1) log
 * shocks. Each season a fresh
 * `affected_fraction` of customers buys the planted basket with weekly
 * probability proportional to plant_strength * ILI. Everyone shops
 * uniformly at random (rate scaled by noise_level) and buys the confounder
 * products on a fixed winter profile unrelated to the epidemic timing.
 */
SyntheticDataset generate_synthetic(const SynthConfig& cfg);

nlohmann::json to_json(const SynthConfig& cfg);

/// receipts.csv, ili.csv (scale 1) and ground_truth.json in `dir`.
void write_synthetic(const std::filesystem::path& dir, const SyntheticDataset& data,
                     const SynthConfig& cfg);

} // namespace flucast::ingest
