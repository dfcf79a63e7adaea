#include "oracles/qp_oracle.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

BoxQpSolution solve_box_qp(const Eigen::MatrixXd& Q, const Eigen::VectorXd& p, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& u) {
    const Eigen::Index m = p.size();
    Eigen::VectorXd x = u / 2.0;
    Eigen::VectorXd s = Eigen::VectorXd::Ones(m);
    Eigen::VectorXd w = Eigen::VectorXd::Ones(m);
    double y = 0.0;
    BoxQpSolution out;
    const double scale = 1.0 + p.cwiseAbs().maxCoeff() + Q.cwiseAbs().maxCoeff() * u.maxCoeff();

    for (int iter = 0; iter < 500; ++iter) {
        const Eigen::VectorXd gap_lo = x;
        const Eigen::VectorXd gap_hi = u - x;
        const Eigen::VectorXd rd = Q * x + p + a * y - s + w;
        const double rp = a.dot(x);
        const double comp = (gap_lo.cwiseProduct(s).sum() + gap_hi.cwiseProduct(w).sum()) / (2.0 * m);
        out.iterations = iter;
        if (comp < 1e-13 * scale && rd.cwiseAbs().maxCoeff() < 1e-11 * scale && std::abs(rp) < 1e-11 * scale) {
            out.converged = true;
            break;
        }
        const double mu = 0.1 * comp;
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + 1, m + 1);
        Eigen::VectorXd rhs(m + 1);
        A.topLeftCorner(m, m) = Q;
        for (Eigen::Index i = 0; i < m; ++i) {
            A(i, i) += s[i] / gap_lo[i] + w[i] / gap_hi[i];
            A(i, m) = a[i];
            A(m, i) = a[i];
            rhs[i] = -rd[i] + (mu - gap_lo[i] * s[i]) / gap_lo[i] - (mu - gap_hi[i] * w[i]) / gap_hi[i];
        }
        rhs[m] = -rp;
        const Eigen::VectorXd step = A.fullPivLu().solve(rhs);
        const Eigen::VectorXd dx = step.head(m);
        const double dy = step[m];
        Eigen::VectorXd ds(m);
        Eigen::VectorXd dw(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            ds[i] = (mu - gap_lo[i] * s[i] - s[i] * dx[i]) / gap_lo[i];
            dw[i] = (mu - gap_hi[i] * w[i] + w[i] * dx[i]) / gap_hi[i];
        }
        double t = 1.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (dx[i] < 0) {
                t = std::min(t, -0.99 * gap_lo[i] / dx[i]);
            }
            if (dx[i] > 0) {
                t = std::min(t, 0.99 * gap_hi[i] / dx[i]);
            }
            if (ds[i] < 0) {
                t = std::min(t, -0.99 * s[i] / ds[i]);
            }
            if (dw[i] < 0) {
                t = std::min(t, -0.99 * w[i] / dw[i]);
            }
        }
        x += t * dx;
        y += t * dy;
        s += t * ds;
        w += t * dw;
    }
    out.x = x;
    out.multiplier = y;
    out.objective = 0.5 * x.dot(Q * x) + p.dot(x);
    return out;
}

SvrDualOracle solve_svr_dual_ipm(const Eigen::MatrixXd& K, const Eigen::VectorXd& z, const Eigen::VectorXd& upper,
                                 double epsilon) {
    const Eigen::Index n = z.size();
    Eigen::MatrixXd Q(2 * n, 2 * n);
    Q << K, -K, -K, K;
    Eigen::VectorXd p(2 * n);
    p << (Eigen::VectorXd::Constant(n, epsilon) - z), (Eigen::VectorXd::Constant(n, epsilon) + z);
    Eigen::VectorXd a(2 * n);
    a << Eigen::VectorXd::Ones(n), -Eigen::VectorXd::Ones(n);
    Eigen::VectorXd u(2 * n);
    u << upper, upper;
    const auto sol = solve_box_qp(Q, p, a, u);
    SvrDualOracle out;
    out.alpha = sol.x.head(n);
    out.alpha_star = sol.x.tail(n);
    out.bias = sol.multiplier;
    out.objective = sol.objective;
    out.converged = sol.converged;
    return out;
}

} // namespace oracle
