#pragma once

#include "flucast/cli/run_config.hpp"
#include "flucast/core/transaction_log.hpp"
#include "flucast/core/weekly_series.hpp"
#include "flucast/discovery/sentinels.hpp"
#include "flucast/forecast/rolling.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace flucast::cli {

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Season start years evaluated for this ILI series under cfg.eval_seasons.
std::vector<core::Season> evaluation_seasons(const core::WeeklySeries& ili, const RunConfig& cfg);

/// The ILI weeks of one season.
core::WeeklySeries season_slice(const core::WeeklySeries& ili, core::Season season);

struct DiscoveryOutput {
    std::map<int, discovery::DiscoveryReport> by_season;  ///< keyed by evaluated season start year
};

struct ForecastOutput {
    forecast::ForecastReport report;
    std::map<int, std::vector<core::ProductId>> product5;  ///< keyed by season start year
};

/// Writes receipts.csv, ili.csv and ground_truth.json under cfg.out.
void cmd_synth(const RunConfig& cfg);

/// Writes sentinel_set.json and discovery_report.txt under cfg.out.
DiscoveryOutput cmd_discover(const RunConfig& cfg);

/// Writes forecast.csv, models.csv and forecast_summary.json under cfg.out.
ForecastOutput cmd_forecast(const RunConfig& cfg);

/// Reads cfg.out/forecast.csv; writes summary.csv, efficiency.csv and summary.json.
void cmd_evaluate(const RunConfig& cfg);

/// Every stage in order.
void cmd_run(const RunConfig& cfg);

nlohmann::json sentinel_sets_json(const DiscoveryOutput& out);
std::map<int, discovery::SentinelSet> read_sentinel_sets(const std::filesystem::path& path);

/**
 * Entry point: `<command> --config <path> [--seed N] [--horizons 1,2]
 * [--methods autoreg,basket_1] [--out DIR] [--fast]`. Returns 0 on success, 1 for
 * usage or configuration errors, 2 for data errors and 3 for numerical
 * failures.
 */
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace flucast::cli
