#pragma once

#include <Eigen/Dense>

namespace oracle {

struct BoxQpSolution {
    Eigen::VectorXd x;
    double multiplier = 0.0;  ///< equality constraint multiplier
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// min 1/2 x'Qx + p'x  s.t.  a'x = 0,  0 <= x <= u, by a primal-dual interior point method.
BoxQpSolution solve_box_qp(const Eigen::MatrixXd& Q, const Eigen::VectorXd& p, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& u);

struct SvrDualOracle {
    Eigen::VectorXd alpha;
    Eigen::VectorXd alpha_star;
    double bias = 0.0;
    double objective = 0.0;
    bool converged = false;
};

/// The epsilon-SVR dual written as a generic box QP over (alpha, alpha*).
/// Per-row upper bounds allow weighted instances.
SvrDualOracle solve_svr_dual_ipm(const Eigen::MatrixXd& K, const Eigen::VectorXd& z, const Eigen::VectorXd& upper,
                                 double epsilon);

} // namespace oracle
