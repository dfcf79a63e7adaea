#include "flucast/metrics/indicators.hpp"

#include "flucast/core/error.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace flucast::metrics {

namespace {

void require_same_length(std::span<const double> a, std::span<const double> b, const char* what) {
    if (a.size() != b.size()) {
        throw DataError(std::string(what) + ": length mismatch");
    }
}

double mean(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) {
        s += v;
    }
    return s / static_cast<double>(x.size());
}

} // namespace

bool try_pearson_r(std::span<const double> x, std::span<const double> y, double& r) {
    require_same_length(x, y, "pearson");
    if (x.size() < 2) {
        return false;
    }
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) {
        return false;
    }
    r = std::clamp(sxy / (std::sqrt(sxx) * std::sqrt(syy)), -1.0, 1.0);
    return true;
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
    require_same_length(x, y, "pearson");
    if (x.size() < 3) {
        throw DataError("pearson needs at least 3 points");
    }
    Correlation c;
    if (!try_pearson_r(x, y, c.r)) {
        throw DataError("pearson undefined for constant input");
    }
    const double df = static_cast<double>(x.size() - 2);
    if (std::abs(c.r) >= 1.0) {
        c.p_value = 0.0;
        return c;
    }
    const double t = c.r * std::sqrt(df / (1.0 - c.r * c.r));
    boost::math::students_t dist(df);
    c.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    return c;
}

double mape(std::span<const double> truth, std::span<const double> pred) {
    require_same_length(truth, pred, "mape");
    if (truth.empty()) {
        throw DataError("mape of empty series");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == 0.0) {
            throw DataError("mape undefined for zero truth value");
        }
        s += std::abs((truth[i] - pred[i]) / truth[i]);
    }
    return s / static_cast<double>(truth.size()) * 100.0;
}

double mean_squared(std::span<const double> residuals) {
    if (residuals.empty()) {
        throw DataError("mean squared error of empty series");
    }
    double s = 0.0;
    for (double r : residuals) {
        s += r * r;
    }
    return s / static_cast<double>(residuals.size());
}

double rmse(std::span<const double> truth, std::span<const double> pred) {
    require_same_length(truth, pred, "rmse");
    if (truth.empty()) {
        throw DataError("rmse of empty series");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double d = pred[i] - truth[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(truth.size())) * 100.0;
}

double relative_efficiency(std::span<const double> resid_1, std::span<const double> resid_2) {
    require_same_length(resid_1, resid_2, "relative_efficiency");
    const double denom = mean_squared(resid_1);
    if (denom == 0.0) {
        throw NumericalError("relative efficiency undefined: approach 1 has zero error");
    }
    return mean_squared(resid_2) / denom;
}

EvalSummary evaluate(std::span<const double> truth, std::span<const double> pred) {
    EvalSummary s;
    s.n_weeks = truth.size();
    s.mape = mape(truth, pred);
    s.rmse = rmse(truth, pred);
    s.pearson = std::numeric_limits<double>::quiet_NaN();
    s.pearson_pvalue = std::numeric_limits<double>::quiet_NaN();
    double r = 0.0;
    if (truth.size() >= 3 && try_pearson_r(truth, pred, r)) {
        const auto c = pearson(truth, pred);
        s.pearson = c.r;
        s.pearson_pvalue = c.p_value;
    }
    return s;
}

} // namespace flucast::metrics
