#include "flucast/core/error.hpp"
#include "flucast/forecast/rolling.hpp"
#include "flucast/ingest/synthetic.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

namespace core = flucast::core;
namespace fc = flucast::forecast;
namespace reg = flucast::regression;

namespace {

core::WeeklySeries small_ili() {
    flucast::ingest::SynthConfig cfg;
    cfg.n_customers = 20;
    cfg.n_products = 20;
    cfg.n_seasons = 3;
    cfg.n_confounders = 2;
    cfg.planted_basket = {"P001", "P002"};
    cfg.rng_seed = 11;
    return flucast::ingest::generate_synthetic(cfg).ili;
}

fc::RollingConfig small_config() {
    fc::RollingConfig rc;
    rc.horizons = {1, 3};
    rc.grid = reg::SearchGrid{{1.0, 100.0}, {0.1, 1.0}, {2, 3}};
    rc.fast_mode = true;
    return rc;
}

const std::vector<core::Season> kSeasons{core::Season(2012), core::Season(2013)};

} // namespace

TEST_CASE("method names") {
    CHECK(fc::Method::parse("autoreg").kind == fc::MethodKind::autoreg);
    CHECK(fc::Method::parse("product5").kind == fc::MethodKind::product5);
    const auto b = fc::Method::parse("basket_5");
    CHECK(b.kind == fc::MethodKind::basket);
    CHECK(b.n_baskets == 5);
    CHECK(b.name() == "basket_5");
    for (const char* bad : {"basket_", "basket_0", "basket_x", "arima"}) {
        CHECK_THROWS_AS(fc::Method::parse(bad), flucast::ConfigError);
    }
}

TEST_CASE("zero sentinel basket model reproduces autoreg exactly") {
    const auto ili = small_ili();
    const auto zero = ili.with_values(std::vector<double>(ili.size(), 0.0));
    fc::SeasonInputs inputs;
    for (const auto& s : kSeasons) {
        inputs[s.start_year()] = {zero};
    }
    const auto rc = small_config();
    const auto a = fc::run_rolling_forecast(fc::Method::parse("autoreg"), ili, {}, kSeasons, rc);
    const auto b = fc::run_rolling_forecast(fc::Method::parse("basket_1"), ili, inputs, kSeasons, rc);
    REQUIRE(!a.records.empty());
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].target_week == b.records[i].target_week);
        CHECK(a.records[i].prediction == b.records[i].prediction);
    }
}

TEST_CASE("rolling records are well formed") {
    const auto ili = small_ili();
    const auto rc = small_config();
    const auto r = fc::run_rolling_forecast(fc::Method::parse("autoreg"), ili, {}, kSeasons, rc);
    REQUIRE(!r.records.empty());
    CHECK(std::is_sorted(r.records.begin(), r.records.end(), [](const auto& x, const auto& y) {
        return std::tie(x.method, x.k, x.target_week) < std::tie(y.method, y.k, y.target_week);
    }));
    for (const auto& rec : r.records) {
        CHECK(rec.prediction > 0.0);
        CHECK(rec.prediction < 1.0);
        CHECK(rec.truth == ili.at(rec.target_week));
        CHECK(rec.truth > rc.eval_threshold);
        const auto pt = *ili.index_of(rec.target_week);
        CHECK(ili.week_at(pt + 1 - static_cast<std::size_t>(rec.k)) == rec.forecast_week);
        CHECK(rec.n_training_rows >= fc::kMinTrainingRows);
        CHECK(std::find(kSeasons.begin(), kSeasons.end(), core::Season(rec.season)) != kSeasons.end());
    }
}

TEST_CASE("fast mode keeps one setting per season and horizon") {
    const auto ili = small_ili();
    const auto r = fc::run_rolling_forecast(fc::Method::parse("autoreg"), ili, {}, kSeasons, small_config());
    for (const auto& a : r.records) {
        for (const auto& b : r.records) {
            if (a.k == b.k && a.season == b.season) {
                CHECK(a.h == b.h);
                CHECK(a.hp.C == b.hp.C);
                CHECK(a.hp.gamma == b.hp.gamma);
            }
        }
    }
}

TEST_CASE("constant ILI is forecast as that constant") {
    const auto base = small_ili();
    auto v = std::vector<double>(base.size(), 0.05);
    const auto ili = base.with_values(v);
    const auto r = fc::run_rolling_forecast(fc::Method::parse("autoreg"), ili, {}, kSeasons, small_config());
    REQUIRE(!r.records.empty());
    for (const auto& rec : r.records) {
        CHECK(rec.prediction == Catch::Approx(0.05).epsilon(1e-9));
    }
}

TEST_CASE("missing sentinel inputs") {
    const auto ili = small_ili();
    CHECK_THROWS_AS(fc::run_rolling_forecast(fc::Method::parse("basket_1"), ili, {}, kSeasons, small_config()),
                    flucast::DataError);
}

TEST_CASE("single week forecast with fixed settings") {
    const auto ili = small_ili();
    const auto rc = small_config();
    const fc::ForecastTask task{fc::Method::parse("autoreg"), 2, {2013, 2}, 3};
    const std::pair<reg::SvrHyperparams, int> fixed{{10.0, 0.5, 0.1}, 3};
    const auto a = fc::forecast_week(task, ili, {}, core::Season(2012), rc, fixed);
    CHECK(a.h == 3);
    CHECK(a.hp.C == 10.0);
    // Values from the forecast week on must not matter.
    auto v = ili.values();
    for (std::size_t i = *ili.index_of({2013, 2}); i < v.size(); ++i) {
        v[i] = 0.5;
    }
    const auto b = fc::forecast_week(task, ili.with_values(v), {}, core::Season(2012), rc, fixed);
    CHECK(a.prediction == b.prediction);
    CHECK_THROWS_AS(fc::forecast_week(task, ili, {}, core::Season(2012), rc,
                                      std::pair<reg::SvrHyperparams, int>{{10.0, 0.5, 0.1}, 60}),
                    flucast::DataError);
}

TEST_CASE("merging restores the record order") {
    fc::ForecastRecord a;
    a.method = "b";
    a.k = 1;
    fc::ForecastRecord b = a;
    b.method = "a";
    fc::ForecastRecord c = a;
    c.k = 0;
    fc::ForecastReport p1{{a}, {"w1"}};
    fc::ForecastReport p2{{b, c}, {"w2"}};
    const auto m = fc::merge_reports({p1, p2});
    REQUIRE(m.records.size() == 3);
    CHECK(m.records[0].method == "a");
    CHECK(m.records[1].k == 0);
    CHECK(m.warnings == std::vector<std::string>{"w1", "w2"});
}
