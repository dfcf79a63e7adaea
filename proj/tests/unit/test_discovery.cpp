#include "flucast/core/error.hpp"
#include "flucast/discovery/product_series.hpp"
#include "flucast/discovery/sentinels.hpp"
#include "flucast/ingest/synthetic.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

namespace core = flucast::core;
namespace discovery = flucast::discovery;
using core::WeekId;

namespace {

// Six weeks; "flu" tracks ILI, "anti" opposes it, "flat" is constant.
struct Toy {
    core::WeeklySeries ili{WeekId(2015, 1), {0.01, 0.02, 0.05, 0.08, 0.04, 0.02}};
    core::TransactionLog log;

    Toy() {
        std::vector<core::Receipt> r;
        int id = 0;
        const int flu[] = {1, 2, 5, 8, 4, 2};
        const int anti[] = {8, 7, 3, 1, 4, 7};
        for (int w = 0; w < 6; ++w) {
            const WeekId week = core::add_weeks({2015, 1}, w);
            for (int i = 0; i < flu[w]; ++i) {
                r.push_back({week, "C" + std::to_string(i % 3), "R" + std::to_string(id++), {"flu", "tissue"}});
            }
            for (int i = 0; i < anti[w]; ++i) {
                r.push_back({week, "C9", "R" + std::to_string(id++), {"anti"}});
            }
            r.push_back({week, "C8", "R" + std::to_string(id++), {"flat"}});
        }
        log = core::TransactionLog(std::move(r));
    }
};

} // namespace

TEST_CASE("volume table counts receipts per week, zero filled") {
    Toy t;
    const auto table = discovery::build_product_series(t.log, t.ili.weeks(), std::vector<core::ProductId>{"ghost"});
    CHECK(table.values("flu") == std::vector<double>{1, 2, 5, 8, 4, 2});
    CHECK(table.values("ghost") == std::vector<double>(6, 0.0));
    CHECK_THROWS_AS(table.values("nope"), flucast::DataError);
    const auto comp = discovery::composite_series({"flu", "tissue"}, table);
    CHECK(comp.values() == std::vector<double>{2, 4, 10, 16, 8, 4});
}

TEST_CASE("product ranking and the strict threshold") {
    Toy t;
    const auto table = discovery::build_product_series(t.log, t.ili.weeks());
    const auto ranked = discovery::rank_products(table, t.ili);
    REQUIRE(ranked.size() == 3);  // flat is skipped
    CHECK(ranked.front().correlation > 0.9);
    CHECK(ranked.back().product == "anti");
    const auto s = discovery::select_sentinel_products(table, t.ili, 0.2);
    CHECK(s == std::vector<core::ProductId>{"flu", "tissue"});
    // The threshold is strict: a product whose correlation equals it is dropped.
    const core::WeeklySeries ili(WeekId(2015, 1), {0.01, 0.02, 0.03, 0.05});
    std::vector<core::Receipt> r;
    const int counts[] = {1, 3, 2, 5};
    for (int w = 0; w < 4; ++w) {
        for (int i = 0; i < counts[w]; ++i) {
            r.push_back({core::add_weeks({2015, 1}, w), "C1", "R" + std::to_string(r.size()), {"x"}});
        }
    }
    const auto small = discovery::build_product_series(core::TransactionLog(std::move(r)), ili.weeks());
    const double rx = discovery::rank_products(small, ili).front().correlation;
    REQUIRE(rx < 1.0);
    CHECK(discovery::select_sentinel_products(small, ili, rx).empty());
    CHECK(discovery::select_sentinel_products(small, ili, std::nextafter(rx, 0.0)).size() == 1);
}

TEST_CASE("peak window is clamped and uses the earliest maximum") {
    core::WeeklySeries ili(WeekId(2015, 1), {0.1, 0.3, 0.3, 0.2});
    const auto w = discovery::find_peak_window(ili, 2);
    CHECK(w.peak == WeekId(2015, 2));
    CHECK(w.first == WeekId(2015, 1));
    CHECK(w.last == WeekId(2015, 4));
    const auto narrow = discovery::find_peak_window(ili, 0);
    CHECK(narrow.first == narrow.last);
}

TEST_CASE("sentinel customers and their basket pool") {
    Toy t;
    const auto window = discovery::find_peak_window(t.ili, 1);
    const auto customers = discovery::select_sentinel_customers(t.log, {"flu"}, window);
    CHECK(customers == std::vector<core::CustomerId>{"C0", "C1", "C2"});
    const auto pool = discovery::collect_basket_pool(t.log, customers, window);
    CHECK(pool.size() == 5 + 8 + 4);
    for (const auto& b : pool) {
        CHECK(b == core::Basket{"flu", "tissue"});
    }
}

TEST_CASE("basket ranking admits single products and flags truncation") {
    Toy t;
    const auto table = discovery::build_product_series(t.log, t.ili.weeks());
    const std::vector<core::Basket> pool{{"flu", "tissue"}, {"flu", "tissue"}, {"anti"}};
    const auto r = discovery::rank_sentinel_baskets(pool, table, t.ili, 5, {0.4, 6});
    REQUIRE(r.baskets.size() == 3);
    CHECK(r.truncated);
    // Equal correlations: the smaller basket comes first.
    CHECK(r.baskets[0].items == core::Basket{"flu"});
    CHECK(r.baskets[1].items == core::Basket{"tissue"});
    CHECK(r.baskets[2].items == core::Basket{"flu", "tissue"});
    CHECK_THROWS_AS(discovery::rank_sentinel_baskets({}, table, t.ili, 5, {}), flucast::DataError);
}

TEST_CASE("sentinel set JSON round trip") {
    discovery::SentinelSet s;
    s.baskets = {{{"a", "b"}, 0.75}, {{"c"}, 0.5}};
    s.source_season = core::Season(2013);
    s.window = {{2014, 2}, {2013, 52}, {2014, 4}};
    s.truncated = true;
    CHECK(discovery::sentinel_set_from_json(discovery::to_json(s)) == s);
    CHECK_THROWS_AS(discovery::sentinel_set_from_json(nlohmann::json::object()), flucast::DataError);
    CHECK(s.top(1).size() == 1);
    CHECK(s.top(9).size() == 2);
}

TEST_CASE("discovery recovers the planted basket on synthetic data") {
    flucast::ingest::SynthConfig cfg;
    cfg.n_customers = 400;
    cfg.n_products = 60;
    cfg.n_seasons = 2;
    cfg.affected_fraction = 0.25;
    const auto data = flucast::ingest::generate_synthetic(cfg);
    const core::Season first(cfg.first_season_year);
    const auto prev = data.ili.slice(first.start(), first.end());
    const auto report = discovery::discover_with_report(data.log, prev);
    REQUIRE_FALSE(report.sentinels.baskets.empty());
    const auto& top = report.sentinels.baskets.front().items;
    CHECK(top.size() >= 2);
    CHECK(core::basket_includes(cfg.planted_basket, top));
    CHECK(report.sentinels.source_season == first);
    CHECK(report.n_sentinel_products >= 3);

    discovery::DiscoveryConfig strict;
    strict.delta = 0.99;
    CHECK_THROWS_WITH(discovery::discover(data.log, prev, strict),
                      Catch::Matchers::ContainsSubstring("no sentinel products"));
    // Same inputs, same answer.
    CHECK(discovery::discover(data.log, prev) == report.sentinels);
}
