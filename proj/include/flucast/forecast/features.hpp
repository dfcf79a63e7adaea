#pragma once

#include "flucast/core/week.hpp"
#include "flucast/core/weekly_series.hpp"
#include "flucast/regression/model_selection.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace flucast::forecast {

double logit(double x);
double inverse_logit(double y);

/// Weeks by which sentinel data runs ahead of the latest ILI report.
inline constexpr int kSentinelLead = 1;

/// Smallest training set accepted by build_training_set.
inline constexpr std::size_t kMinTrainingRows = 10;

/// Map applied to sentinel volumes before they enter a feature row.
enum class SentinelTransform { identity, log1p };

std::string to_string(SentinelTransform t);
/// Accepts "identity" and "log1p"; throws ConfigError otherwise.
SentinelTransform parse_sentinel_transform(const std::string& name);
double apply(SentinelTransform t, double volume);

/**
 * @brief Regression inputs for one time origin t.
 *
 * ili_lags holds logit ILI at t-h+1 .. t, oldest first. sentinel_lags[n]
 * holds the transformed volumes of sentinel n at t-h+1 .. t+kSentinelLead. The
 * target (logit ILI at t+k) is NaN until filled by build_training_set.
 */
struct FeatureRow {
    core::WeekId origin{2000, 1};
    int h = 0;
    int k = 0;
    std::vector<double> ili_lags;
    std::vector<std::vector<double>> sentinel_lags;
    double target = 0.0;

    std::size_t width() const;
    /// ILI lags followed by each sentinel's lags.
    std::vector<double> flatten() const;
};

/// h + n_sentinels * (h + kSentinelLead).
std::size_t feature_width(int h, std::size_t n_sentinels);

/**
 * Features at origin t. Reads ILI only at weeks <= t and sentinels only
 * at weeks <= t + kSentinelLead. Lags follow the ILI timeline, so they
 * cross the off-season gap. Sentinel series must share that timeline.
 * Throws DataError when fewer than h weeks end at t or a sentinel does
 * not cover the lag range.
 */
FeatureRow assemble_features(const core::WeeklySeries& ili, std::span<const core::WeeklySeries> sentinels,
                             core::WeekId t, int h, int k,
                             SentinelTransform transform = SentinelTransform::identity);

struct TrainingSet {
    std::vector<FeatureRow> rows;
    regression::Dataset data;
};

/**
 * One row per origin o from season_start onwards whose target o+k is at
 * or before t-1, the last reported week at forecast week t. Origins
 * without full lag coverage are skipped. Throws DataError when fewer
 * than kMinTrainingRows rows remain.
 */
TrainingSet build_training_set(const core::WeeklySeries& ili, std::span<const core::WeeklySeries> sentinels,
                               core::WeekId season_start, core::WeekId t, int h, int k,
                               SentinelTransform transform = SentinelTransform::identity);

} // namespace flucast::forecast
