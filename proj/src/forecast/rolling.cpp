#include "flucast/forecast/rolling.hpp"

#include "flucast/core/error.hpp"
#include "flucast/core/parallel.hpp"
#include "flucast/discovery/sentinels.hpp"
#include "flucast/forecast/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace flucast::forecast {

namespace {

double to_rate(double logit_value) {
    const double p = inverse_logit(logit_value);
    return std::clamp(p, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
}

bool record_less(const ForecastRecord& a, const ForecastRecord& b) {
    return std::tie(a.method, a.k, a.target_week) < std::tie(b.method, b.k, b.target_week);
}

} // namespace

std::string Method::name() const {
    switch (kind) {
    case MethodKind::autoreg:
        return "autoreg";
    case MethodKind::basket:
        return "basket_" + std::to_string(n_baskets);
    case MethodKind::product5:
        return "product5";
    }
    return "unknown";
}

Method Method::parse(const std::string& name) {
    if (name == "autoreg") {
        return {MethodKind::autoreg, 0};
    }
    if (name == "product5") {
        return {MethodKind::product5, 0};
    }
    const std::string prefix = "basket_";
    if (name.rfind(prefix, 0) == 0 && name.size() > prefix.size()) {
        const auto digits = name.substr(prefix.size());
        if (std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
            digits.size() <= 3) {
            const auto n = static_cast<std::size_t>(std::stoul(digits));
            if (n >= 1) {
                return {MethodKind::basket, n};
            }
        }
    }
    throw ConfigError("unknown forecast method '" + name + "'");
}

WeekForecast forecast_week(const ForecastTask& task, const core::WeeklySeries& ili,
                           std::span<const core::WeeklySeries> sentinels, core::Season season,
                           const RollingConfig& config,
                           const std::optional<std::pair<regression::SvrHyperparams, int>>& fixed) {
    if (task.k < 1) {
        throw ConfigError("horizon k must be at least 1");
    }
    const auto pt = ili.index_of(task.forecast_week);
    if (!pt || *pt == 0) {
        throw DataError("forecast week " + task.forecast_week.to_string() + " has no prior ILI report");
    }
    const core::WeekId origin = ili.week_at(*pt - 1);
    const core::WeekId train_start = season.previous().start();
    auto make = [&](int h) {
        return build_training_set(ili, sentinels, train_start, task.forecast_week, h, task.k,
                                  config.sentinel_transform)
            .data;
    };

    regression::SvrHyperparams hp;
    int h = task.h;
    if (fixed) {
        hp = fixed->first;
        h = fixed->second;
    } else {
        const auto best = regression::grid_search(make, config.grid, config.cv).best;
        hp = best.hp;
        h = best.h;
    }
    const auto data = make(h);
    const auto model = regression::svr_train(data.X, data.y, hp, config.cv.solver);
    const auto row = assemble_features(ili, sentinels, origin, h, task.k, config.sentinel_transform).flatten();
    WeekForecast out;
    out.prediction = to_rate(model.predict(row));
    out.h = h;
    out.hp = hp;
    out.n_training_rows = static_cast<std::size_t>(data.y.size());
    return out;
}

double ForecastRecord::abs_pct_error() const {
    return std::abs((truth - prediction) / truth) * 100.0;
}

ForecastReport run_rolling_forecast(const Method& method, const core::WeeklySeries& ili,
                                     const SeasonInputs& inputs, const std::vector<core::Season>& seasons,
                                     const RollingConfig& config) {
    struct Group {
        core::Season season;
        int k;
        const std::vector<core::WeeklySeries>* sentinels;
        std::vector<std::size_t> targets;
    };
    static const std::vector<core::WeeklySeries> kNone;
    std::vector<Group> groups;
    for (const auto& season : seasons) {
        const std::vector<core::WeeklySeries>* sentinels = &kNone;
        if (method.kind != MethodKind::autoreg) {
            const auto it = inputs.find(season.start_year());
            if (it == inputs.end()) {
                throw DataError("no sentinel inputs for season " + season.label() + " (" + method.name() + ")");
            }
            sentinels = &it->second;
        }
        std::vector<std::size_t> targets;
        for (std::size_t i = 0; i < ili.size(); ++i) {
            if (season.contains(ili.week_at(i)) && ili.value_at(i) > config.eval_threshold) {
                targets.push_back(i);
            }
        }
        for (int k : config.horizons) {
            if (k < 1) {
                throw ConfigError("horizon k must be at least 1");
            }
            groups.push_back({season, k, sentinels, targets});
        }
    }

    std::vector<ForecastReport> parts(groups.size());
    core::parallel_for(groups.size(), [&](std::size_t g) {
        const auto& grp = groups[g];
        auto& part = parts[g];
        std::optional<std::pair<regression::SvrHyperparams, int>> fixed;
        for (std::size_t target : grp.targets) {
            const auto uk = static_cast<std::size_t>(grp.k);
            if (target + 1 < uk + 1) {
                part.warnings.push_back(ili.week_at(target).to_string() + " k=" + std::to_string(grp.k) +
                                        ": no forecast week on the timeline");
                continue;
            }
            ForecastTask task{method, grp.k, ili.week_at(target + 1 - uk), 2};
            WeekForecast wf;
            try {
                wf = forecast_week(task, ili, *grp.sentinels, grp.season, config, fixed);
            } catch (const DataError& e) {
                part.warnings.push_back(method.name() + " " + ili.week_at(target).to_string() +
                                        " k=" + std::to_string(grp.k) + ": " + e.what());
                continue;
            }
            if (config.fast_mode && !fixed) {
                fixed = std::make_pair(wf.hp, wf.h);
            }
            ForecastRecord rec;
            rec.method = method.name();
            rec.k = grp.k;
            rec.target_week = ili.week_at(target);
            rec.forecast_week = task.forecast_week;
            rec.season = grp.season.start_year();
            rec.truth = ili.value_at(target);
            rec.prediction = wf.prediction;
            rec.h = wf.h;
            rec.hp = wf.hp;
            rec.n_training_rows = wf.n_training_rows;
            part.records.push_back(rec);
        }
    });
    return merge_reports(std::move(parts));
}

ForecastReport merge_reports(std::vector<ForecastReport> parts) {
    ForecastReport out;
    for (auto& p : parts) {
        out.records.insert(out.records.end(), p.records.begin(), p.records.end());
        out.warnings.insert(out.warnings.end(), p.warnings.begin(), p.warnings.end());
    }
    std::stable_sort(out.records.begin(), out.records.end(), record_less);
    return out;
}

Product5 product5_series(const core::TransactionLog& log, const core::WeeklySeries& ili_prev_season,
                         const discovery::ProductSeriesTable& timeline_table) {
    const auto prev = discovery::build_product_series(log, ili_prev_season.weeks());
    const auto ranked = discovery::rank_products(prev, ili_prev_season);
    if (ranked.empty()) {
        throw DataError("no product has a defined correlation with the previous season");
    }
    Product5 out{{}, core::WeeklySeries(timeline_table.weeks().front(), {0.0}), {}};
    const std::size_t n = std::min<std::size_t>(5, ranked.size());
    if (n < 5) {
        out.warnings.push_back("product5: only " + std::to_string(n) + " products with a defined correlation");
    }
    for (std::size_t i = 0; i < n; ++i) {
        out.products.push_back(ranked[i].product);
    }
    std::sort(out.products.begin(), out.products.end());
    out.series = discovery::composite_series(out.products, timeline_table);
    return out;
}

std::vector<core::WeeklySeries> basket_inputs(const discovery::SentinelSet& set, std::size_t n,
                                              const discovery::ProductSeriesTable& timeline_table) {
    std::vector<core::WeeklySeries> out;
    for (const auto& basket : set.top(n)) {
        out.push_back(discovery::composite_series(basket, timeline_table));
    }
    return out;
}

} // namespace flucast::forecast
