#include "flucast/forecast/features.hpp"

#include "flucast/core/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace flucast::forecast {

double logit(double x) {
    if (!(x > 0.0 && x < 1.0)) {
        throw DataError("logit: argument outside (0, 1)");
    }
    return std::log(x / (1.0 - x));
}

double inverse_logit(double y) {
    if (std::isnan(y)) {
        throw NumericalError("inverse_logit of NaN");
    }
    if (y >= 0.0) {
        return 1.0 / (1.0 + std::exp(-y));
    }
    const double e = std::exp(y);
    return e / (1.0 + e);
}

std::string to_string(SentinelTransform t) {
    return t == SentinelTransform::log1p ? "log1p" : "identity";
}

SentinelTransform parse_sentinel_transform(const std::string& name) {
    if (name == "identity") {
        return SentinelTransform::identity;
    }
    if (name == "log1p") {
        return SentinelTransform::log1p;
    }
    throw ConfigError("unknown sentinel transform '" + name + "'");
}

double apply(SentinelTransform t, double volume) {
    return t == SentinelTransform::log1p ? std::log1p(volume) : volume;
}

std::size_t FeatureRow::width() const {
    std::size_t w = ili_lags.size();
    for (const auto& s : sentinel_lags) {
        w += s.size();
    }
    return w;
}

std::vector<double> FeatureRow::flatten() const {
    std::vector<double> out(ili_lags);
    for (const auto& s : sentinel_lags) {
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

std::size_t feature_width(int h, std::size_t n_sentinels) {
    return static_cast<std::size_t>(h) + n_sentinels * static_cast<std::size_t>(h + kSentinelLead);
}

FeatureRow assemble_features(const core::WeeklySeries& ili, std::span<const core::WeeklySeries> sentinels,
                             core::WeekId t, int h, int k, SentinelTransform transform) {
    if (h < 1 || k < 1) {
        throw ConfigError("feature window and horizon must be positive");
    }
    const auto p = ili.index_of(t);
    if (!p) {
        throw DataError("no ILI report for origin " + t.to_string());
    }
    const auto uh = static_cast<std::size_t>(h);
    if (*p + 1 < uh) {
        throw DataError("insufficient history: " + std::to_string(*p + 1) + " weeks up to " +
                        t.to_string() + ", need " + std::to_string(h));
    }
    const std::size_t first = *p + 1 - uh;

    FeatureRow row;
    row.origin = t;
    row.h = h;
    row.k = k;
    row.target = std::numeric_limits<double>::quiet_NaN();
    row.ili_lags.reserve(uh);
    for (std::size_t i = first; i <= *p; ++i) {
        row.ili_lags.push_back(logit(ili.value_at(i)));
    }
    const core::WeekId first_week = ili.week_at(first);
    const std::size_t len = uh + static_cast<std::size_t>(kSentinelLead);
    for (const auto& s : sentinels) {
        const auto q = s.index_of(first_week);
        if (!q || *q + len > s.size() || s.week_at(*q + uh - 1) != t) {
            throw DataError("sentinel series does not cover " + first_week.to_string() + " .. " +
                            t.to_string() + " plus lead");
        }
        std::vector<double> lags;
        for (std::size_t i = *q; i < *q + len; ++i) {
            lags.push_back(apply(transform, s.value_at(i)));
        }
        row.sentinel_lags.push_back(std::move(lags));
    }
    return row;
}

TrainingSet build_training_set(const core::WeeklySeries& ili, std::span<const core::WeeklySeries> sentinels,
                               core::WeekId season_start, core::WeekId t, int h, int k,
                               SentinelTransform transform) {
    const auto pt = ili.index_of(t);
    if (!pt) {
        throw DataError("forecast week " + t.to_string() + " is not on the ILI timeline");
    }
    if (*pt == 0) {
        throw DataError("no reported ILI before " + t.to_string());
    }
    const std::size_t last_target = *pt - 1;
    std::size_t start = 0;
    while (start < ili.size() && ili.week_at(start) < season_start) {
        ++start;
    }
    const auto uh = static_cast<std::size_t>(h);
    const auto uk = static_cast<std::size_t>(k);

    TrainingSet ts;
    for (std::size_t o = std::max(start, uh - 1); o + uk <= last_target; ++o) {
        FeatureRow row = assemble_features(ili, sentinels, ili.week_at(o), h, k, transform);
        row.target = logit(ili.value_at(o + uk));
        ts.rows.push_back(std::move(row));
    }
    if (ts.rows.size() < kMinTrainingRows) {
        throw DataError("training set for " + t.to_string() + " has " + std::to_string(ts.rows.size()) +
                        " rows, need at least " + std::to_string(kMinTrainingRows));
    }
    const auto width = static_cast<Eigen::Index>(feature_width(h, sentinels.size()));
    ts.data.X.resize(static_cast<Eigen::Index>(ts.rows.size()), width);
    ts.data.y.resize(static_cast<Eigen::Index>(ts.rows.size()));
    for (std::size_t r = 0; r < ts.rows.size(); ++r) {
        const auto flat = ts.rows[r].flatten();
        for (Eigen::Index c = 0; c < width; ++c) {
            ts.data.X(static_cast<Eigen::Index>(r), c) = flat[static_cast<std::size_t>(c)];
        }
        ts.data.y[static_cast<Eigen::Index>(r)] = ts.rows[r].target;
    }
    return ts;
}

} // namespace flucast::forecast
