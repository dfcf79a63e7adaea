#pragma once

#include "flucast/core/transaction_log.hpp"
#include "flucast/core/weekly_series.hpp"
#include "flucast/discovery/product_series.hpp"
#include "flucast/discovery/sentinel_set.hpp"
#include "flucast/mining/apriori.hpp"

#include <utility>
#include <vector>

namespace flucast::discovery {

struct ProductCorrelation {
    core::ProductId product;
    double correlation = 0.0;
};

/// Pearson correlation of every product with the ILI series over their common
/// weeks, highest first (ties by product id). Constant series are skipped.
std::vector<ProductCorrelation> rank_products(const ProductSeriesTable& table,
                                              const core::WeeklySeries& ili);

/// Sorted products whose correlation with ILI exceeds `delta`.
std::vector<core::ProductId> select_sentinel_products(const ProductSeriesTable& table,
                                                      const core::WeeklySeries& ili,
                                                      double delta = 0.2);

/// Peak = earliest week holding the maximum; the window [peak - half_width,
/// peak + half_width] is clamped to the series.
PeakWindow find_peak_window(const core::WeeklySeries& ili, int half_width = 2);

/// Customers with at least one in-window receipt containing a sentinel product.
std::vector<core::CustomerId> select_sentinel_customers(const core::TransactionLog& log,
                                                        const std::vector<core::ProductId>& sentinels,
                                                        const PeakWindow& window);

/// Every in-window basket of the given customers, without attribution.
std::vector<core::Basket> collect_basket_pool(const core::TransactionLog& log,
                                              const std::vector<core::CustomerId>& customers,
                                              const PeakWindow& window);

struct BasketRanking {
    std::vector<ScoredBasket> baskets;  ///< top_n by correlation, highest first
    std::size_t n_frequent = 0;
    bool truncated = false;
};

/**
 * Mines frequent baskets from the pool, scores each basket's composite series
 * against ILI over the full ILI span and keeps the `top_n` best. Ties are
 * broken by smaller size, then item order. Baskets with a constant composite
 * are not scored.
 */
BasketRanking rank_sentinel_baskets(const std::vector<core::Basket>& pool,
                                    const ProductSeriesTable& table, const core::WeeklySeries& ili,
                                    std::size_t top_n, const mining::AprioriOptions& apriori);

SentinelSet select_sentinel_baskets(const std::vector<core::Basket>& pool,
                                    const ProductSeriesTable& table, const core::WeeklySeries& ili,
                                    std::size_t top_n, const mining::AprioriOptions& apriori,
                                    const PeakWindow& window);

struct DiscoveryConfig {
    double delta = 0.2;
    int half_width = 2;
    double min_support = 0.01;
    std::size_t max_itemset_size = 6;
    std::size_t top_n = 5;
};

struct DiscoveryReport {
    SentinelSet sentinels;
    std::size_t n_products = 0;
    std::size_t n_sentinel_products = 0;
    std::size_t n_sentinel_customers = 0;
    std::size_t pool_size = 0;
    std::size_t n_frequent = 0;
};

/**
 * Sentinel basket discovery on one previous season: sentinel products,
 * peak window, sentinel customers, basket pool, frequent baskets, ranking.
 * `ili_prev_season` defines the season span; receipts outside it are unused.
 */
DiscoveryReport discover_with_report(const core::TransactionLog& log,
                                     const core::WeeklySeries& ili_prev_season,
                                     const DiscoveryConfig& config = {});

SentinelSet discover(const core::TransactionLog& log, const core::WeeklySeries& ili_prev_season,
                     const DiscoveryConfig& config = {});

} // namespace flucast::discovery
