#pragma once

#include "flucast/forecast/rolling.hpp"
#include "flucast/metrics/tables.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace flucast::forecast {

inline constexpr const char* kForecastHeader = "method,k,year,week,truth,prediction,abs_pct_error";

/// One row per record; year and week name the target week.
void write_forecast_csv(std::ostream& out, const ForecastReport& report);
void write_forecast_csv(const std::filesystem::path& path, const ForecastReport& report);

/// Model choice per record: method,k,year,week,h,C,gamma,epsilon,n_training_rows.
void write_models_csv(std::ostream& out, const ForecastReport& report);

/// Reads the CSV written above. Only the CSV fields and the season are filled.
std::vector<ForecastRecord> read_forecast_csv(std::istream& in, const std::string& source = "<stream>");
std::vector<ForecastRecord> read_forecast_csv(const std::filesystem::path& path);

/// Horizons present in the records, ascending.
std::vector<int> horizons_of(const std::vector<ForecastRecord>& records);

/// Pooled rows first, then one block per season; methods sorted by name.
std::vector<metrics::SummaryRow> summary_rows(const std::vector<ForecastRecord>& records);

/**
 * Relative efficiency MSE(baseline) / MSE(method) for every other method,
 * paired on target weeks present for both. Horizon k of the i-th method
 * uses bootstrap seed stream (i, k). Empty when the baseline is absent.
 */
std::vector<metrics::EfficiencyRow> efficiency_rows(const std::vector<ForecastRecord>& records,
                                                    const std::string& baseline,
                                                    const metrics::EfficiencyCiOptions& options);

nlohmann::json summary_json(const std::vector<metrics::SummaryRow>& rows);

} // namespace flucast::forecast
