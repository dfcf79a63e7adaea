#include "flucast/discovery/sentinels.hpp"

#include "flucast/core/error.hpp"
#include "flucast/core/parallel.hpp"
#include "flucast/metrics/indicators.hpp"

#include <algorithm>

namespace flucast::discovery {

namespace {

bool correlate(const core::WeeklySeries& s, const core::WeeklySeries& ili, double& r) {
    auto [a, b] = core::align(s, ili);
    return metrics::try_pearson_r(a.values(), b.values(), r);
}

void check_table_covers(const ProductSeriesTable& table, const core::WeeklySeries& ili) {
    core::WeeklySeries span(table.weeks(), std::vector<double>(table.weeks().size(), 0.0));
    core::align(span, ili);
}

SentinelSet make_sentinel_set(BasketRanking ranking, const PeakWindow& window) {
    const auto season = core::Season::containing(window.peak);
    if (!season) {
        throw DataError("peak week " + window.peak.to_string() + " lies outside any season");
    }
    SentinelSet set;
    set.baskets = std::move(ranking.baskets);
    set.source_season = *season;
    set.window = window;
    set.truncated = ranking.truncated;
    return set;
}

} // namespace

std::vector<ProductCorrelation> rank_products(const ProductSeriesTable& table,
                                              const core::WeeklySeries& ili) {
    check_table_covers(table, ili);
    const auto products = table.products();
    std::vector<double> r(products.size(), 0.0);
    std::vector<char> defined(products.size(), 0);
    core::parallel_for(products.size(), [&](std::size_t i) {
        defined[i] = correlate(table.series(products[i]), ili, r[i]);
    });
    std::vector<ProductCorrelation> out;
    for (std::size_t i = 0; i < products.size(); ++i) {
        if (defined[i]) {
            out.push_back({products[i], r[i]});
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.correlation > b.correlation;
    });
    return out;
}

std::vector<core::ProductId> select_sentinel_products(const ProductSeriesTable& table,
                                                      const core::WeeklySeries& ili, double delta) {
    if (!(delta >= 0.0 && delta < 1.0)) {
        throw ConfigError("sentinel product threshold must lie in [0, 1)");
    }
    std::vector<core::ProductId> out;
    for (const auto& pc : rank_products(table, ili)) {
        if (pc.correlation > delta) {
            out.push_back(pc.product);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

PeakWindow find_peak_window(const core::WeeklySeries& ili, int half_width) {
    if (half_width < 0) {
        throw ConfigError("peak half width must be non-negative");
    }
    const auto& v = ili.values();
    // max_element returns the first maximum, which is the earliest week.
    const auto peak = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    const auto hw = static_cast<std::size_t>(half_width);
    const std::size_t lo = peak >= hw ? peak - hw : 0;
    const std::size_t hi = std::min(peak + hw, v.size() - 1);
    return {ili.week_at(peak), ili.week_at(lo), ili.week_at(hi)};
}

std::vector<core::CustomerId> select_sentinel_customers(const core::TransactionLog& log,
                                                        const std::vector<core::ProductId>& sentinels,
                                                        const PeakWindow& window) {
    std::vector<core::CustomerId> out;
    for (const auto& r : log.receipts()) {
        if (!window.contains(r.week)) {
            continue;
        }
        const bool hit = std::any_of(r.basket.begin(), r.basket.end(), [&](const auto& p) {
            return std::binary_search(sentinels.begin(), sentinels.end(), p);
        });
        if (hit) {
            out.push_back(r.customer);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<core::Basket> collect_basket_pool(const core::TransactionLog& log,
                                              const std::vector<core::CustomerId>& customers,
                                              const PeakWindow& window) {
    std::vector<core::Basket> pool;
    for (const auto& r : log.receipts()) {
        if (window.contains(r.week) &&
            std::binary_search(customers.begin(), customers.end(), r.customer)) {
            pool.push_back(r.basket);
        }
    }
    return pool;
}

BasketRanking rank_sentinel_baskets(const std::vector<core::Basket>& pool,
                                    const ProductSeriesTable& table, const core::WeeklySeries& ili,
                                    std::size_t top_n, const mining::AprioriOptions& apriori) {
    if (top_n < 1) {
        throw ConfigError("top_n must be at least 1");
    }
    if (pool.empty()) {
        throw DataError("basket pool is empty");
    }
    check_table_covers(table, ili);
    const auto frequent = mining::apriori(pool, apriori);

    std::vector<double> r(frequent.size(), 0.0);
    std::vector<char> defined(frequent.size(), 0);
    core::parallel_for(frequent.size(), [&](std::size_t i) {
        defined[i] = correlate(composite_series(frequent[i].items, table), ili, r[i]);
    });

    BasketRanking out;
    out.n_frequent = frequent.size();
    for (std::size_t i = 0; i < frequent.size(); ++i) {
        if (defined[i]) {
            out.baskets.push_back({frequent[i].items, r[i]});
        }
    }
    std::sort(out.baskets.begin(), out.baskets.end(), [](const auto& a, const auto& b) {
        if (a.correlation != b.correlation) {
            return a.correlation > b.correlation;
        }
        if (a.items.size() != b.items.size()) {
            return a.items.size() < b.items.size();
        }
        return a.items < b.items;
    });
    if (out.baskets.empty()) {
        throw DataError("no frequent basket has a defined correlation with ILI");
    }
    if (out.baskets.size() < top_n) {
        out.truncated = true;
    } else {
        out.baskets.resize(top_n);
    }
    return out;
}

SentinelSet select_sentinel_baskets(const std::vector<core::Basket>& pool,
                                    const ProductSeriesTable& table, const core::WeeklySeries& ili,
                                    std::size_t top_n, const mining::AprioriOptions& apriori,
                                    const PeakWindow& window) {
    return make_sentinel_set(rank_sentinel_baskets(pool, table, ili, top_n, apriori), window);
}

DiscoveryReport discover_with_report(const core::TransactionLog& log,
                                     const core::WeeklySeries& ili_prev_season,
                                     const DiscoveryConfig& config) {
    DiscoveryReport report;
    const auto table = build_product_series(log, ili_prev_season.weeks());
    report.n_products = table.size();

    const auto products = select_sentinel_products(table, ili_prev_season, config.delta);
    report.n_sentinel_products = products.size();
    if (products.empty()) {
        throw DataError("no sentinel products above threshold " + std::to_string(config.delta));
    }
    const auto window = find_peak_window(ili_prev_season, config.half_width);
    const auto customers = select_sentinel_customers(log, products, window);
    report.n_sentinel_customers = customers.size();
    const auto pool = collect_basket_pool(log, customers, window);
    report.pool_size = pool.size();

    const mining::AprioriOptions apriori{config.min_support, config.max_itemset_size};
    auto ranking = rank_sentinel_baskets(pool, table, ili_prev_season, config.top_n, apriori);
    report.n_frequent = ranking.n_frequent;

    report.sentinels = make_sentinel_set(std::move(ranking), window);
    return report;
}

SentinelSet discover(const core::TransactionLog& log, const core::WeeklySeries& ili_prev_season,
                     const DiscoveryConfig& config) {
    return discover_with_report(log, ili_prev_season, config).sentinels;
}

} // namespace flucast::discovery
