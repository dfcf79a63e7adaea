#include "flucast/regression/svr.hpp"

#include "flucast/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace flucast::regression {

namespace {

constexpr double kTau = 1e-12;

double sq_dist(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        const double t = a[k] - b[k];
        s += t * t;
    }
    return s;
}

/// SMO state over beta = [alpha; alpha*] with labels +1 / -1.
class SmoSolver {
public:
    SmoSolver(const Eigen::MatrixXd& K, const Eigen::VectorXd& z, const SvrHyperparams& hp)
        : K_(K), n_(static_cast<std::size_t>(z.size())), C_(hp.C), beta_(Eigen::VectorXd::Zero(2 * z.size())),
          grad_(2 * z.size()) {
        for (std::size_t t = 0; t < n_; ++t) {
            grad_[t] = hp.epsilon - z[t];
            grad_[t + n_] = hp.epsilon + z[t];
        }
    }

    DualSolution run(const SolverOptions& options) {
        DualSolution sol;
        std::size_t iter = 0;
        double gap = 0.0;
        while (true) {
            std::size_t i = 0;
            std::size_t j = 0;
            gap = select_working_set(i, j);
            if (gap < options.tolerance) {
                break;
            }
            if (iter >= options.max_iterations) {
                throw NumericalError("SVR solver did not converge");
            }
            update_pair(i, j);
            ++iter;
        }
        sol.alpha = beta_.head(n_);
        sol.alpha_star = beta_.tail(n_);
        sol.bias = compute_bias();
        sol.iterations = iter;
        sol.gap = std::max(gap, 0.0);
        return sol;
    }

private:
    double y(std::size_t t) const { return t < n_ ? 1.0 : -1.0; }
    std::size_t row(std::size_t t) const { return t < n_ ? t : t - n_; }
    /// Q_st = y_s y_t K(s, t).
    double q(std::size_t s, std::size_t t) const { return y(s) * y(t) * K_(row(s), row(t)); }
    bool at_upper(std::size_t t) const { return beta_[t] >= C_; }
    bool at_lower(std::size_t t) const { return beta_[t] <= 0.0; }
    bool in_up(std::size_t t) const { return y(t) > 0 ? !at_upper(t) : !at_lower(t); }
    bool in_low(std::size_t t) const { return y(t) > 0 ? !at_lower(t) : !at_upper(t); }

    /// Returns the maximal violating pair gap; fills the pair chosen by the
    /// second-order rule.
    double select_working_set(std::size_t& out_i, std::size_t& out_j) const {
        const std::size_t m = 2 * n_;
        double gmax = -std::numeric_limits<double>::infinity();
        double gmax2 = -std::numeric_limits<double>::infinity();
        std::size_t gi = m;
        for (std::size_t t = 0; t < m; ++t) {
            if (in_up(t) && -y(t) * grad_[t] >= gmax) {
                gmax = -y(t) * grad_[t];
                gi = t;
            }
        }
        std::size_t gj = m;
        double obj_min = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < m; ++t) {
            if (!in_low(t)) {
                continue;
            }
            gmax2 = std::max(gmax2, y(t) * grad_[t]);
            if (gi == m) {
                continue;
            }
            const double b = gmax + y(t) * grad_[t];
            if (b <= 0.0) {
                continue;
            }
            double a = K_(row(gi), row(gi)) + K_(row(t), row(t)) - 2.0 * y(gi) * q(gi, t);
            if (a <= 0.0) {
                a = kTau;
            }
            if (-(b * b) / a <= obj_min) {
                obj_min = -(b * b) / a;
                gj = t;
            }
        }
        out_i = gi;
        out_j = gj;
        if (gi == m || gj == m) {
            return 0.0;
        }
        return gmax + gmax2;
    }

    void update_pair(std::size_t i, std::size_t j) {
        const double old_i = beta_[i];
        const double old_j = beta_[j];
        const double qij = q(i, j);
        const double kii = K_(row(i), row(i));
        const double kjj = K_(row(j), row(j));
        double& ai = beta_[i];
        double& aj = beta_[j];
        if (y(i) != y(j)) {
            double quad = kii + kjj + 2.0 * qij;
            if (quad <= 0.0) {
                quad = kTau;
            }
            const double delta = (-grad_[i] - grad_[j]) / quad;
            const double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0.0) {
                if (aj < 0.0) {
                    aj = 0.0;
                    ai = diff;
                }
            } else if (ai < 0.0) {
                ai = 0.0;
                aj = -diff;
            }
            if (diff > 0.0) {
                if (ai > C_) {
                    ai = C_;
                    aj = C_ - diff;
                }
            } else if (aj > C_) {
                aj = C_;
                ai = C_ + diff;
            }
        } else {
            double quad = kii + kjj - 2.0 * qij;
            if (quad <= 0.0) {
                quad = kTau;
            }
            const double delta = (grad_[i] - grad_[j]) / quad;
            const double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > C_) {
                if (ai > C_) {
                    ai = C_;
                    aj = sum - C_;
                }
            } else if (aj < 0.0) {
                aj = 0.0;
                ai = sum;
            }
            if (sum > C_) {
                if (aj > C_) {
                    aj = C_;
                    ai = sum - C_;
                }
            } else if (ai < 0.0) {
                ai = 0.0;
                aj = sum;
            }
        }
        const double di = ai - old_i;
        const double dj = aj - old_j;
        for (std::size_t t = 0; t < 2 * n_; ++t) {
            grad_[t] += q(t, i) * di + q(t, j) * dj;
        }
    }

    double compute_bias() const {
        double ub = std::numeric_limits<double>::infinity();
        double lb = -std::numeric_limits<double>::infinity();
        double sum_free = 0.0;
        std::size_t n_free = 0;
        for (std::size_t t = 0; t < 2 * n_; ++t) {
            const double yg = y(t) * grad_[t];
            if (at_upper(t)) {
                if (y(t) < 0) {
                    ub = std::min(ub, yg);
                } else {
                    lb = std::max(lb, yg);
                }
            } else if (at_lower(t)) {
                if (y(t) > 0) {
                    ub = std::min(ub, yg);
                } else {
                    lb = std::max(lb, yg);
                }
            } else {
                ++n_free;
                sum_free += yg;
            }
        }
        const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
        return -rho;
    }

    const Eigen::MatrixXd& K_;
    std::size_t n_;
    double C_;
    Eigen::VectorXd beta_;
    Eigen::VectorXd grad_;
};

void require_finite(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (!X.allFinite() || !y.allFinite()) {
        throw DataError("SVR training data contains non-finite values");
    }
}

} // namespace

void SvrHyperparams::validate() const {
    if (!(C > 0.0) || !(gamma > 0.0) || !(epsilon >= 0.0) || !std::isfinite(C) || !std::isfinite(gamma)) {
        throw ConfigError("SVR hyperparameters need C > 0, gamma > 0, epsilon >= 0");
    }
}

double rbf_kernel(std::span<const double> x, std::span<const double> z, double gamma) {
    if (x.size() != z.size()) {
        throw DataError("rbf kernel: dimension mismatch");
    }
    if (!(gamma > 0.0)) {
        throw ConfigError("rbf kernel: gamma must be positive");
    }
    return std::exp(-gamma * sq_dist(x.data(), z.data(), x.size()));
}

Eigen::MatrixXd rbf_gram(const Eigen::MatrixXd& X, double gamma) {
    const auto n = X.rows();
    const auto d = static_cast<std::size_t>(X.cols());
    // Row-major copy so each row is contiguous.
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> R = X;
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        K(i, i) = 1.0;
        for (Eigen::Index j = 0; j < i; ++j) {
            const double v = std::exp(-gamma * sq_dist(R.row(i).data(), R.row(j).data(), d));
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    return K;
}

DualSolution solve_svr_dual(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& targets,
                            const SvrHyperparams& hp, const SolverOptions& options) {
    hp.validate();
    if (kernel.rows() != targets.size() || kernel.cols() != targets.size()) {
        throw DataError("SVR dual: kernel and target sizes differ");
    }
    SmoSolver solver(kernel, targets, hp);
    auto sol = solver.run(options);
    sol.objective = svr_dual_objective(kernel, targets, sol.alpha, sol.alpha_star, hp.epsilon);
    return sol;
}

double svr_dual_objective(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& targets,
                          const Eigen::VectorXd& alpha, const Eigen::VectorXd& alpha_star,
                          double epsilon) {
    const Eigen::VectorXd theta = alpha - alpha_star;
    return 0.5 * theta.dot(kernel * theta) + epsilon * (alpha.sum() + alpha_star.sum()) -
           targets.dot(theta);
}

Eigen::VectorXd kkt_residuals(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& targets,
                              const Eigen::VectorXd& alpha, const Eigen::VectorXd& alpha_star,
                              double bias, const SvrHyperparams& hp) {
    const Eigen::VectorXd f = kernel * (alpha - alpha_star) + Eigen::VectorXd::Constant(targets.size(), bias);
    auto violation = [&](double beta, double v) {
        // v is the derivative of the Lagrangian in this variable.
        if (beta <= 0.0) {
            return std::max(0.0, -v);
        }
        if (beta >= hp.C) {
            return std::max(0.0, v);
        }
        return std::abs(v);
    };
    Eigen::VectorXd res(targets.size());
    for (Eigen::Index i = 0; i < targets.size(); ++i) {
        const double r = f[i] - targets[i];
        res[i] = std::max(violation(alpha[i], r + hp.epsilon), violation(alpha_star[i], hp.epsilon - r));
    }
    return res;
}

SvrModel::SvrModel(Eigen::MatrixXd support_vectors, Eigen::VectorXd dual_coeffs, double bias,
                   SvrHyperparams hp, FeatureScaling scaling, double target_mean,
                   double target_scale)
    : support_vectors_(std::move(support_vectors)), dual_coeffs_(std::move(dual_coeffs)),
      bias_(bias), hp_(hp), scaling_(std::move(scaling)), target_mean_(target_mean),
      target_scale_(target_scale) {
    if (support_vectors_.rows() != dual_coeffs_.size() ||
        (support_vectors_.rows() > 0 &&
         static_cast<std::size_t>(support_vectors_.cols()) != scaling_.mean.size()) ||
        scaling_.mean.size() != scaling_.scale.size()) {
        throw DataError("inconsistent SVR model dimensions");
    }
}

double SvrModel::predict(std::span<const double> x) const {
    if (x.size() != dimension()) {
        throw DataError("SVR predict: expected " + std::to_string(dimension()) + " features, got " +
                        std::to_string(x.size()));
    }
    std::vector<double> xs(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        xs[k] = (x[k] - scaling_.mean[k]) / scaling_.scale[k];
    }
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> R = support_vectors_;
    double f = bias_;
    for (Eigen::Index i = 0; i < R.rows(); ++i) {
        f += dual_coeffs_[i] * std::exp(-hp_.gamma * sq_dist(R.row(i).data(), xs.data(), xs.size()));
    }
    return f * target_scale_ + target_mean_;
}

StandardizedProblem standardize_training(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const auto n = X.rows();
    const auto d = X.cols();
    if (n != y.size()) {
        throw DataError("SVR train: row count and target length differ");
    }
    if (n < 2) {
        throw DataError("SVR train needs at least 2 rows");
    }
    require_finite(X, y);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        for (Eigen::Index k = 0; k < d; ++k) {
            if (X(a, k) != X(b, k)) {
                return X(a, k) < X(b, k);
            }
        }
        return y[a] < y[b];
    });
    StandardizedProblem p;
    p.X.resize(n, d);
    p.z.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        p.X.row(i) = X.row(order[static_cast<std::size_t>(i)]);
        p.z[i] = y[order[static_cast<std::size_t>(i)]];
    }

    auto moments = [n](const auto& column, double& mean, double& scale) {
        mean = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            mean += column[i];
        }
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            var += (column[i] - mean) * (column[i] - mean);
        }
        scale = std::sqrt(var / static_cast<double>(n));
        if (!(scale > 1e-12 * std::max(1.0, std::abs(mean)))) {
            scale = 1.0;
        }
    };

    p.scaling.mean.resize(static_cast<std::size_t>(d));
    p.scaling.scale.resize(static_cast<std::size_t>(d));
    for (Eigen::Index k = 0; k < d; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        moments(p.X.col(k), p.scaling.mean[uk], p.scaling.scale[uk]);
        for (Eigen::Index i = 0; i < n; ++i) {
            p.X(i, k) = (p.X(i, k) - p.scaling.mean[uk]) / p.scaling.scale[uk];
        }
    }
    moments(p.z, p.target_mean, p.target_scale);
    for (Eigen::Index i = 0; i < n; ++i) {
        p.z[i] = (p.z[i] - p.target_mean) / p.target_scale;
    }
    return p;
}

SvrModel fit_standardized(const StandardizedProblem& problem, const Eigen::MatrixXd& kernel,
                          const SvrHyperparams& hp, const SolverOptions& options) {
    const auto sol = solve_svr_dual(kernel, problem.z, hp, options);
    const Eigen::VectorXd theta = sol.coefficients();
    const auto n = problem.X.rows();
    const auto d = problem.X.cols();

    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (theta[i] != 0.0) {
            kept.push_back(i);
        }
    }
    Eigen::MatrixXd sv(static_cast<Eigen::Index>(kept.size()), d);
    Eigen::VectorXd coeffs(static_cast<Eigen::Index>(kept.size()));
    for (std::size_t r = 0; r < kept.size(); ++r) {
        sv.row(static_cast<Eigen::Index>(r)) = problem.X.row(kept[r]);
        coeffs[static_cast<Eigen::Index>(r)] = theta[kept[r]];
    }
    return SvrModel(std::move(sv), std::move(coeffs), sol.bias, hp, problem.scaling,
                    problem.target_mean, problem.target_scale);
}

SvrModel svr_train(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const SvrHyperparams& hp,
                   const SolverOptions& options) {
    hp.validate();
    const auto problem = standardize_training(X, y);
    return fit_standardized(problem, rbf_gram(problem.X, hp.gamma), hp, options);
}

double svr_predict(const SvrModel& model, std::span<const double> x) {
    return model.predict(x);
}

} // namespace flucast::regression
