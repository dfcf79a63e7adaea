#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <cstddef>
#include <span>
#include <vector>

namespace flucast::regression {

struct SvrHyperparams {
    double C = 1.0;        ///< box bound on each dual variable
    double gamma = 0.1;    ///< RBF width
    double epsilon = 0.1;  ///< insensitive tube half-width, on the standardized target scale

    void validate() const;
    friend bool operator==(const SvrHyperparams&, const SvrHyperparams&) = default;
};

struct SolverOptions {
    /// Stop once the maximal violating pair gap falls below this value.
    double tolerance = 1e-3;
    std::size_t max_iterations = 10'000'000;
};

/// exp(-gamma * ||x - z||^2).
double rbf_kernel(std::span<const double> x, std::span<const double> z, double gamma);

/// Gram matrix of the rows of X.
Eigen::MatrixXd rbf_gram(const Eigen::MatrixXd& X, double gamma);

/**
 * @brief Solution of the epsilon-SVR dual
 *
 *   min  1/2 (a - a*)' K (a - a*) + eps * sum(a + a*) - z' (a - a*)
 *   s.t. sum(a - a*) = 0,  0 <= a, a* <= C
 *
 * `bias` is the offset b of f(x) = sum_i (a_i - a*_i) K(x_i, x) + b.
 */
struct DualSolution {
    Eigen::VectorXd alpha;
    Eigen::VectorXd alpha_star;
    double bias = 0.0;
    double objective = 0.0;
    std::size_t iterations = 0;
    /// Maximal violating pair gap at termination.
    double gap = 0.0;

    Eigen::VectorXd coefficients() const { return alpha - alpha_star; }
};

/**
 * Sequential minimal optimization over the 2n dual variables with
 * second-order working set selection. Throws NumericalError when the
 * iteration cap is hit.
 */
DualSolution solve_svr_dual(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& targets,
                            const SvrHyperparams& hp, const SolverOptions& options = {});

double svr_dual_objective(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& targets,
                          const Eigen::VectorXd& alpha, const Eigen::VectorXd& alpha_star,
                          double epsilon);

/// Per-instance violation of the dual optimality conditions, given the bias.
Eigen::VectorXd kkt_residuals(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& targets,
                              const Eigen::VectorXd& alpha, const Eigen::VectorXd& alpha_star,
                              double bias, const SvrHyperparams& hp);

struct FeatureScaling {
    std::vector<double> mean;
    std::vector<double> scale;  ///< standard deviation, 1 for constant features
};

/**
 * @brief Trained epsilon-SVR with an RBF kernel.
 *
 * Inputs and targets are standardized with the training statistics; the
 * support vectors are stored on the standardized scale.
 */
class SvrModel {
public:
    SvrModel(Eigen::MatrixXd support_vectors, Eigen::VectorXd dual_coeffs, double bias,
             SvrHyperparams hp, FeatureScaling scaling, double target_mean, double target_scale);

    std::size_t dimension() const noexcept { return scaling_.mean.size(); }
    const Eigen::MatrixXd& support_vectors() const noexcept { return support_vectors_; }
    const Eigen::VectorXd& dual_coeffs() const noexcept { return dual_coeffs_; }
    double bias() const noexcept { return bias_; }
    const SvrHyperparams& hyperparams() const noexcept { return hp_; }
    const FeatureScaling& feature_scaling() const noexcept { return scaling_; }
    double target_mean() const noexcept { return target_mean_; }
    double target_scale() const noexcept { return target_scale_; }

    /// Throws DataError on a dimension mismatch.
    double predict(std::span<const double> x) const;

private:
    Eigen::MatrixXd support_vectors_;
    Eigen::VectorXd dual_coeffs_;
    double bias_;
    SvrHyperparams hp_;
    FeatureScaling scaling_;
    double target_mean_;
    double target_scale_;
};

/// Training rows in canonical order, standardized with their own statistics.
struct StandardizedProblem {
    Eigen::MatrixXd X;
    Eigen::VectorXd z;
    FeatureScaling scaling;
    double target_mean = 0.0;
    double target_scale = 1.0;
};

StandardizedProblem standardize_training(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

/// Fits on a standardized problem whose Gram matrix is already computed.
SvrModel fit_standardized(const StandardizedProblem& problem, const Eigen::MatrixXd& kernel,
                          const SvrHyperparams& hp, const SolverOptions& options = {});

/**
 * Standardizes X and y, solves the dual and keeps the rows with nonzero
 * coefficients. Rows are put into a canonical order first, so the model
 * does not depend on the order of the training rows.
 */
SvrModel svr_train(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const SvrHyperparams& hp,
                   const SolverOptions& options = {});

double svr_predict(const SvrModel& model, std::span<const double> x);

nlohmann::json to_json(const SvrModel& model);
SvrModel svr_model_from_json(const nlohmann::json& j);

} // namespace flucast::regression
