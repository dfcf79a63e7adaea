#pragma once

#include <cstddef>
#include <span>

namespace flucast::metrics {

struct Correlation {
    double r = 0.0;
    double p_value = 1.0;
};

/**
 * Product-moment correlation with a two-sided p-value from Student's t
 * with n - 2 degrees of freedom. Requires equal lengths >= 3 and
 * non-constant inputs (DataError otherwise).
 */
Correlation pearson(std::span<const double> x, std::span<const double> y);

/// Correlation coefficient only; false when either input is constant.
bool try_pearson_r(std::span<const double> x, std::span<const double> y, double& r);

/// Mean absolute percentage error, in percent. Truth values must be nonzero.
double mape(std::span<const double> truth, std::span<const double> pred);

/// Root mean squared error multiplied by 100.
double rmse(std::span<const double> truth, std::span<const double> pred);

double mean_squared(std::span<const double> residuals);

/// MSE(resid_2) / MSE(resid_1); above 1 means approach 1 is more accurate.
double relative_efficiency(std::span<const double> resid_1, std::span<const double> resid_2);

struct EvalSummary {
    double pearson = 0.0;  ///< NaN when undefined (fewer than 3 weeks or constant input)
    double pearson_pvalue = 1.0;
    double mape = 0.0;
    double rmse = 0.0;
    std::size_t n_weeks = 0;
};

EvalSummary evaluate(std::span<const double> truth, std::span<const double> pred);

} // namespace flucast::metrics
