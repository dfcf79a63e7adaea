#pragma once

#include "flucast/discovery/sentinels.hpp"
#include "flucast/forecast/rolling.hpp"
#include "flucast/ingest/synthetic.hpp"
#include "flucast/metrics/bootstrap.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace flucast::cli {

struct GridConfig {
    double c_min = 1.0;
    double c_max = 1e4;
    std::size_t c_count = 7;
    double gamma_min = 0.01;
    double gamma_max = 2.0;
    std::size_t gamma_count = 8;
    int h_min = 2;
    int h_max = 6;

    regression::SearchGrid grid() const;
};

struct RunConfig {
    // [paths]
    std::filesystem::path receipts;  ///< empty: <out>/receipts.csv
    std::filesystem::path ili;       ///< empty: <out>/ili.csv
    std::filesystem::path out = "out";
    // [data]
    double ili_scale = 1.0;
    // [synth]
    ingest::SynthConfig synth;
    // [discovery]
    discovery::DiscoveryConfig discovery;
    // [model]
    GridConfig grid;
    double epsilon = 0.1;
    std::size_t folds = 5;
    bool shuffled_folds = false;
    double tolerance = 1e-3;
    bool fast_mode = false;
    forecast::SentinelTransform sentinel_transform = forecast::SentinelTransform::log1p;
    std::vector<int> horizons{1, 2, 3, 4};
    std::vector<std::string> methods{"autoreg", "basket_1", "basket_5", "product5"};
    /// Season start years to evaluate; empty means every season with a predecessor.
    std::vector<int> eval_seasons;
    std::size_t workers = 0;
    // [evaluation]
    double threshold = 0.02;
    std::size_t n_boot = 1000;
    double mean_block_length = 14.0;
    double alpha = 0.05;
    // [run]
    std::uint64_t seed = 42;

    std::filesystem::path receipts_path() const;
    std::filesystem::path ili_path() const;
    forecast::RollingConfig rolling() const;
    metrics::EfficiencyCiOptions efficiency() const;

    /// Throws ConfigError on inconsistent values.
    void validate() const;
};

/**
 * Reads an INI document with sections paths, data, synth, discovery, model,
 * evaluation and run. Unknown sections or keys are a ConfigError.
 */
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(std::istream& in);

/// Applies one "section.key" = value assignment.
void set_option(RunConfig& cfg, const std::string& key, const std::string& value);

nlohmann::json to_json(const RunConfig& cfg);

std::vector<int> parse_int_list(const std::string& text);
std::vector<std::string> parse_string_list(const std::string& text);

} // namespace flucast::cli
