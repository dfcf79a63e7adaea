#pragma once

#include "flucast/regression/svr.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace flucast::regression {

struct Fold {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/**
 * k folds over [0, n). Ordered folds are contiguous blocks, the first
 * n % k of them one element longer. Unordered folds apply the same
 * chunking to a seeded permutation.
 */
std::vector<Fold> kfold_splits(std::size_t n, std::size_t k, bool ordered = true,
                               std::uint64_t seed = 0);

struct Dataset {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
};

struct SearchGrid {
    std::vector<double> C;
    std::vector<double> gamma;
    std::vector<int> h;

    /// C log-spaced over [1, 1e4] (7 points), gamma linear over [0.01, 2] (8 points), h = 2..6.
    static SearchGrid standard();
    /// n points spaced evenly in log10 between lo and hi.
    static std::vector<double> log_space(double lo, double hi, std::size_t n);
    static std::vector<double> lin_space(double lo, double hi, std::size_t n);

    std::size_t size() const noexcept { return C.size() * gamma.size() * h.size(); }
};

/// Lower is better.
using Scorer = std::function<double(std::span<const double> truth, std::span<const double> pred)>;

double rmse_scorer(std::span<const double> truth, std::span<const double> pred);

struct CvOptions {
    std::size_t folds = 5;
    bool ordered = true;
    std::uint64_t seed = 0;
    double epsilon = 0.1;
    SolverOptions solver;
    Scorer scorer = rmse_scorer;
};

struct GridPoint {
    SvrHyperparams hp;
    int h = 0;
    /// Mean score over folds; NaN when the candidate could not be evaluated.
    double score = 0.0;
};

struct GridSearchResult {
    GridPoint best;
    /// Every candidate, ordered by (C, gamma, h).
    std::vector<GridPoint> evaluated;
};

/// Mean fold score of one hyperparameter setting.
double cross_validate(const Dataset& data, const SvrHyperparams& hp, const CvOptions& options = {});

/**
 * Exhaustive search over the grid. `make_dataset(h)` builds the regression
 * problem for window h; it is called once per h, sequentially, and may
 * throw to mark that h unusable. Candidates are scored concurrently. Ties
 * go to smaller C, then smaller gamma, then smaller h. Throws
 * NumericalError when no candidate can be scored.
 */
GridSearchResult grid_search(const std::function<Dataset(int h)>& make_dataset,
                             const SearchGrid& grid, const CvOptions& options = {});

/// Same search on a fixed dataset; grid.h is reported but not used to build data.
GridSearchResult grid_search(const Dataset& data, const SearchGrid& grid,
                             const CvOptions& options = {});

} // namespace flucast::regression
