#pragma once

#include "flucast/core/transaction_log.hpp"
#include "flucast/core/week.hpp"
#include "flucast/core/weekly_series.hpp"
#include "flucast/discovery/product_series.hpp"
#include "flucast/discovery/sentinel_set.hpp"
#include "flucast/forecast/features.hpp"
#include "flucast/regression/model_selection.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace flucast::forecast {

enum class MethodKind { autoreg, basket, product5 };

struct Method {
    MethodKind kind = MethodKind::autoreg;
    std::size_t n_baskets = 0;  ///< basket methods only

    /// "autoreg", "basket_<n>" or "product5".
    std::string name() const;
    /// Throws ConfigError on an unknown name.
    static Method parse(const std::string& name);
    friend bool operator==(const Method&, const Method&) = default;
};

struct ForecastTask {
    Method method;
    int k = 1;
    core::WeekId forecast_week{2000, 1};
    int h = 2;
};

struct RollingConfig {
    std::vector<int> horizons{1, 2, 3, 4};
    regression::SearchGrid grid = regression::SearchGrid::standard();
    regression::CvOptions cv;
    /// Reuse the first week's hyperparameters within each (method, k, season).
    bool fast_mode = false;
    /// Weeks with ILI strictly above this are evaluated.
    double eval_threshold = 0.02;
    SentinelTransform sentinel_transform = SentinelTransform::log1p;
};

/// Model choice and output for one forecast cell.
struct WeekForecast {
    double prediction = 0.0;  ///< ILI rate in (0, 1)
    int h = 0;
    regression::SvrHyperparams hp;
    std::size_t n_training_rows = 0;
};

/**
 * Forecast for task.forecast_week: trains on the season before `season`
 * onwards and predicts the target task.k weeks after the last reported
 * week. With `fixed` set, the grid search is skipped and that (hp, h) is
 * refitted instead; task.h is then ignored.
 */
WeekForecast forecast_week(const ForecastTask& task, const core::WeeklySeries& ili,
                           std::span<const core::WeeklySeries> sentinels, core::Season season,
                           const RollingConfig& config,
                           const std::optional<std::pair<regression::SvrHyperparams, int>>& fixed = std::nullopt);

struct ForecastRecord {
    std::string method;
    int k = 1;
    core::WeekId target_week{2000, 1};
    core::WeekId forecast_week{2000, 1};
    int season = 0;  ///< start year
    double truth = 0.0;
    double prediction = 0.0;
    int h = 0;
    regression::SvrHyperparams hp;
    std::size_t n_training_rows = 0;

    double abs_pct_error() const;
};

struct ForecastReport {
    /// Ordered by (method, k, target week).
    std::vector<ForecastRecord> records;
    std::vector<std::string> warnings;
};

/// Exogenous series of one method, per evaluated season (keyed by start year).
using SeasonInputs = std::map<int, std::vector<core::WeeklySeries>>;

/**
 * Rolling forecasts for every evaluated season and horizon. The target
 * weeks are the season's weeks with ILI above the threshold; the forecast
 * week for target w and horizon k is w - k + 1 on the ILI timeline.
 * Throws DataError when `inputs` lacks a season.
 */
ForecastReport run_rolling_forecast(const Method& method, const core::WeeklySeries& ili,
                                     const SeasonInputs& inputs, const std::vector<core::Season>& seasons,
                                     const RollingConfig& config);

/// Merges reports and restores the (method, k, target week) order.
ForecastReport merge_reports(std::vector<ForecastReport> parts);

struct Product5 {
    std::vector<core::ProductId> products;
    core::WeeklySeries series;
    std::vector<std::string> warnings;
};

/**
 * Composite of the five products most correlated with the previous
 * season's ILI, evaluated on `timeline`. Uses every product with a
 * defined correlation when fewer than five exist, with a warning.
 */
Product5 product5_series(const core::TransactionLog& log, const core::WeeklySeries& ili_prev_season,
                         const discovery::ProductSeriesTable& timeline_table);

/// Composite series of the top `n` baskets, on the table's weeks.
std::vector<core::WeeklySeries> basket_inputs(const discovery::SentinelSet& set, std::size_t n,
                                              const discovery::ProductSeriesTable& timeline_table);

} // namespace flucast::forecast
