#pragma once

#include "flucast/core/random.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace flucast::metrics {

/// Index trace of one stationary-bootstrap resample.
struct ResampleIndices {
    std::vector<std::size_t> indices;
    /// Geometric length drawn for each block; the final block may be cut short
    /// in `indices` when the output is full.
    std::vector<std::size_t> block_lengths;
};

/**
 * Stationary bootstrap index draw: blocks start uniformly at random, have
 * geometric lengths with mean `mean_block_length` (restart probability
 * 1 / mean_block_length) and wrap circularly past the end.
 */
ResampleIndices stationary_bootstrap_indices(std::size_t n, double mean_block_length, core::Rng& rng);

std::vector<double> stationary_bootstrap(std::span<const double> series, double mean_block_length,
                                         core::Rng& rng);

struct EfficiencyEstimate {
    double point = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t n_bootstrap = 0;
    double mean_block_length = 0.0;
};

struct EfficiencyCiOptions {
    std::size_t n_boot = 1000;
    double mean_block_length = 14.0;
    double alpha = 0.05;
    std::uint64_t seed = 0;
};

/**
 * Relative-efficiency replicates over paired resamples: both residual series
 * are resampled with the same block indices. Replicates whose approach-1 MSE
 * is zero are redrawn; more than 10 * n_boot draws in total is a
 * NumericalError. Replicate i uses its own RNG stream derived from `seed`,
 * so the result does not depend on the worker count.
 */
std::vector<double> efficiency_replicates(std::span<const double> resid_1,
                                          std::span<const double> resid_2,
                                          const EfficiencyCiOptions& options);

/// Point estimate plus percentile interval at level 1 - alpha.
EfficiencyEstimate efficiency_ci(std::span<const double> resid_1, std::span<const double> resid_2,
                                 const EfficiencyCiOptions& options = {});

/// Linear-interpolation sample quantile of sorted data (type 7).
double quantile_sorted(std::span<const double> sorted, double q);

} // namespace flucast::metrics
