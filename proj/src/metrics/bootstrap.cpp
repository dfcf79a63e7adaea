#include "flucast/metrics/bootstrap.hpp"

#include "flucast/core/error.hpp"
#include "flucast/core/parallel.hpp"
#include "flucast/metrics/indicators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

namespace flucast::metrics {

ResampleIndices stationary_bootstrap_indices(std::size_t n, double mean_block_length,
                                             core::Rng& rng) {
    if (!(mean_block_length >= 1.0)) {
        throw ConfigError("mean block length must be >= 1");
    }
    if (n == 0) {
        throw DataError("cannot resample an empty series");
    }
    ResampleIndices out;
    out.indices.reserve(n);
    std::uniform_int_distribution<std::size_t> start_dist(0, n - 1);
    std::geometric_distribution<std::size_t> extra_dist(1.0 / mean_block_length);
    while (out.indices.size() < n) {
        const std::size_t start = start_dist(rng);
        const std::size_t length = 1 + extra_dist(rng);
        out.block_lengths.push_back(length);
        for (std::size_t j = 0; j < length && out.indices.size() < n; ++j) {
            out.indices.push_back((start + j) % n);
        }
    }
    return out;
}

std::vector<double> stationary_bootstrap(std::span<const double> series, double mean_block_length,
                                         core::Rng& rng) {
    const auto draw = stationary_bootstrap_indices(series.size(), mean_block_length, rng);
    std::vector<double> out;
    out.reserve(series.size());
    for (auto i : draw.indices) {
        out.push_back(series[i]);
    }
    return out;
}

std::vector<double> efficiency_replicates(std::span<const double> resid_1,
                                          std::span<const double> resid_2,
                                          const EfficiencyCiOptions& options) {
    if (resid_1.size() != resid_2.size()) {
        throw DataError("efficiency: residual series differ in length");
    }
    if (options.n_boot < 1000) {
        throw ConfigError("efficiency CI needs n_boot >= 1000");
    }
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
        throw ConfigError("alpha must lie in (0, 1)");
    }
    const std::size_t n = resid_1.size();
    const std::size_t cap = 10 * options.n_boot;
    std::vector<double> replicates(options.n_boot);
    // Total draws across replicates; the outcome only depends on whether it exceeds cap.
    std::atomic<std::size_t> draws{0};
    std::atomic<bool> exhausted{false};

    core::parallel_for(options.n_boot, [&](std::size_t b) {
        std::vector<double> r1(n);
        std::vector<double> r2(n);
        for (std::size_t attempt = 0;; ++attempt) {
            if (draws.fetch_add(1) + 1 > cap || exhausted.load()) {
                exhausted.store(true);
                return;
            }
            core::Rng rng(core::derive_seed(options.seed, b * cap + attempt));
            const auto draw = stationary_bootstrap_indices(n, options.mean_block_length, rng);
            for (std::size_t i = 0; i < n; ++i) {
                r1[i] = resid_1[draw.indices[i]];
                r2[i] = resid_2[draw.indices[i]];
            }
            const double denom = mean_squared(r1);
            if (denom > 0.0) {
                replicates[b] = mean_squared(r2) / denom;
                return;
            }
        }
    });

    if (exhausted.load()) {
        throw NumericalError("efficiency bootstrap: too many degenerate resamples");
    }
    return replicates;
}

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) {
        throw DataError("quantile of empty sample");
    }
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

EfficiencyEstimate efficiency_ci(std::span<const double> resid_1, std::span<const double> resid_2,
                                 const EfficiencyCiOptions& options) {
    EfficiencyEstimate est;
    est.point = relative_efficiency(resid_1, resid_2);
    auto reps = efficiency_replicates(resid_1, resid_2, options);
    std::sort(reps.begin(), reps.end());
    est.ci_low = quantile_sorted(reps, options.alpha / 2.0);
    est.ci_high = quantile_sorted(reps, 1.0 - options.alpha / 2.0);
    est.n_bootstrap = options.n_boot;
    est.mean_block_length = options.mean_block_length;
    return est;
}

} // namespace flucast::metrics
