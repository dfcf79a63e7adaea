#include "flucast/regression/model_selection.hpp"

#include "flucast/core/error.hpp"
#include "flucast/core/parallel.hpp"
#include "flucast/core/random.hpp"
#include "flucast/metrics/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace flucast::regression {

namespace {

Dataset subset(const Dataset& data, const std::vector<std::size_t>& rows) {
    Dataset out;
    out.X.resize(static_cast<Eigen::Index>(rows.size()), data.X.cols());
    out.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out.X.row(static_cast<Eigen::Index>(r)) = data.X.row(static_cast<Eigen::Index>(rows[r]));
        out.y[static_cast<Eigen::Index>(r)] = data.y[static_cast<Eigen::Index>(rows[r])];
    }
    return out;
}

/// Fold data prepared once and shared by every C value.
struct PreparedFold {
    StandardizedProblem problem;
    Eigen::MatrixXd kernel;
    Dataset test;
};

std::vector<PreparedFold> prepare_folds(const Dataset& data, double gamma, const CvOptions& options) {
    const auto n = static_cast<std::size_t>(data.y.size());
    std::vector<PreparedFold> out;
    for (const auto& fold : kfold_splits(n, options.folds, options.ordered, options.seed)) {
        const auto train = subset(data, fold.train);
        PreparedFold pf{standardize_training(train.X, train.y), {}, subset(data, fold.test)};
        pf.kernel = rbf_gram(pf.problem.X, gamma);
        out.push_back(std::move(pf));
    }
    return out;
}

double score_folds(const std::vector<PreparedFold>& folds, const SvrHyperparams& hp,
                   const CvOptions& options) {
    double total = 0.0;
    for (const auto& f : folds) {
        const auto model = fit_standardized(f.problem, f.kernel, hp, options.solver);
        std::vector<double> pred(static_cast<std::size_t>(f.test.y.size()));
        for (Eigen::Index i = 0; i < f.test.X.rows(); ++i) {
            const Eigen::VectorXd row = f.test.X.row(i).transpose();
            pred[static_cast<std::size_t>(i)] = model.predict({row.data(), static_cast<std::size_t>(row.size())});
        }
        total += options.scorer({f.test.y.data(), static_cast<std::size_t>(f.test.y.size())}, pred);
    }
    return total / static_cast<double>(folds.size());
}

} // namespace

std::vector<Fold> kfold_splits(std::size_t n, std::size_t k, bool ordered, std::uint64_t seed) {
    if (k < 2) {
        throw ConfigError("k-fold splitting needs k >= 2");
    }
    if (n < k) {
        throw DataError("k-fold splitting: " + std::to_string(n) + " rows for " + std::to_string(k) +
                        " folds");
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    if (!ordered) {
        core::Rng rng(core::derive_seed(seed, 0));
        std::shuffle(perm.begin(), perm.end(), rng);
    }
    std::vector<Fold> folds(k);
    std::size_t begin = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t len = n / k + (f < n % k ? 1 : 0);
        std::vector<std::size_t> test(perm.begin() + static_cast<std::ptrdiff_t>(begin),
                                      perm.begin() + static_cast<std::ptrdiff_t>(begin + len));
        std::sort(test.begin(), test.end());
        folds[f].test = std::move(test);
        begin += len;
    }
    for (std::size_t f = 0; f < k; ++f) {
        for (std::size_t g = 0; g < k; ++g) {
            if (g != f) {
                folds[f].train.insert(folds[f].train.end(), folds[g].test.begin(), folds[g].test.end());
            }
        }
        std::sort(folds[f].train.begin(), folds[f].train.end());
    }
    return folds;
}

std::vector<double> SearchGrid::log_space(double lo, double hi, std::size_t n) {
    if (n == 0 || !(lo > 0.0) || !(hi >= lo)) {
        throw ConfigError("log_space needs 0 < lo <= hi and n >= 1");
    }
    if (n == 1) {
        return {lo};
    }
    std::vector<double> out(n);
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> SearchGrid::lin_space(double lo, double hi, std::size_t n) {
    if (n == 0 || !(hi >= lo)) {
        throw ConfigError("lin_space needs lo <= hi and n >= 1");
    }
    if (n == 1) {
        return {lo};
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    out.back() = hi;
    return out;
}

SearchGrid SearchGrid::standard() {
    return SearchGrid{log_space(1.0, 1e4, 7), lin_space(0.01, 2.0, 8), {2, 3, 4, 5, 6}};
}

double rmse_scorer(std::span<const double> truth, std::span<const double> pred) {
    return metrics::rmse(truth, pred);
}

double cross_validate(const Dataset& data, const SvrHyperparams& hp, const CvOptions& options) {
    hp.validate();
    return score_folds(prepare_folds(data, hp.gamma, options), hp, options);
}

GridSearchResult grid_search(const std::function<Dataset(int h)>& make_dataset,
                             const SearchGrid& grid, const CvOptions& options) {
    if (grid.size() == 0) {
        throw ConfigError("grid search over an empty grid");
    }
    for (int h : grid.h) {
        if (h < 2 || h > 6) {
            throw ConfigError("window size h must lie in [2, 6]");
        }
    }
    std::vector<int> hs = grid.h;
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    std::vector<double> cs = grid.C;
    std::sort(cs.begin(), cs.end());
    std::vector<double> gs = grid.gamma;
    std::sort(gs.begin(), gs.end());

    std::vector<std::optional<Dataset>> data(hs.size());
    for (std::size_t a = 0; a < hs.size(); ++a) {
        try {
            data[a] = make_dataset(hs[a]);
        } catch (const Error&) {
            data[a].reset();
        }
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    // scores[(h, gamma)][C]
    std::vector<std::vector<double>> scores(hs.size() * gs.size(), std::vector<double>(cs.size(), nan));
    core::parallel_for(hs.size() * gs.size(), [&](std::size_t cell) {
        const std::size_t a = cell / gs.size();
        const std::size_t g = cell % gs.size();
        if (!data[a]) {
            return;
        }
        std::vector<PreparedFold> folds;
        try {
            folds = prepare_folds(*data[a], gs[g], options);
        } catch (const Error&) {
            return;
        }
        for (std::size_t c = 0; c < cs.size(); ++c) {
            try {
                const SvrHyperparams hp{cs[c], gs[g], options.epsilon};
                const double s = score_folds(folds, hp, options);
                scores[cell][c] = std::isfinite(s) ? s : nan;
            } catch (const Error&) {
            }
        }
    });

    GridSearchResult result;
    bool found = false;
    for (std::size_t c = 0; c < cs.size(); ++c) {
        for (std::size_t g = 0; g < gs.size(); ++g) {
            for (std::size_t a = 0; a < hs.size(); ++a) {
                GridPoint p{SvrHyperparams{cs[c], gs[g], options.epsilon}, hs[a],
                            scores[a * gs.size() + g][c]};
                result.evaluated.push_back(p);
                if (!std::isnan(p.score) && (!found || p.score < result.best.score)) {
                    result.best = p;
                    found = true;
                }
            }
        }
    }
    if (!found) {
        throw NumericalError("grid search: every candidate failed");
    }
    return result;
}

GridSearchResult grid_search(const Dataset& data, const SearchGrid& grid, const CvOptions& options) {
    SearchGrid g = grid;
    if (g.h.empty()) {
        g.h = {2};
    }
    return grid_search([&](int) { return data; }, g, options);
}

} // namespace flucast::regression
