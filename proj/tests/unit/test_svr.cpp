#include "flucast/core/error.hpp"
#include "flucast/regression/svr.hpp"
#include "oracles/qp_oracle.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace reg = flucast::regression;

namespace {

struct Instance {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
};

Instance random_instance(std::mt19937& rng, int n, int d) {
    std::normal_distribution<double> g(0.0, 1.0);
    Instance in{Eigen::MatrixXd(n, d), Eigen::VectorXd(n)};
    Eigen::VectorXd w(d);
    for (int k = 0; k < d; ++k) {
        w[k] = g(rng);
    }
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) {
            in.X(i, k) = g(rng);
        }
        in.y[i] = std::sin(in.X.row(i).dot(w)) + 0.3 * g(rng);
    }
    return in;
}

double predict_row(const reg::SvrModel& m, const Eigen::MatrixXd& X, Eigen::Index i) {
    const Eigen::VectorXd row = X.row(i).transpose();
    return m.predict({row.data(), static_cast<std::size_t>(row.size())});
}

} // namespace

TEST_CASE("rbf kernel values") {
    const std::vector<double> a{0.0};
    const std::vector<double> b{1.0};
    CHECK(reg::rbf_kernel(a, a, 0.7) == 1.0);
    CHECK(reg::rbf_kernel(a, b, 0.5) == Catch::Approx(0.6065306597).epsilon(1e-9));
    CHECK(reg::rbf_kernel(a, b, 1e-12) == Catch::Approx(1.0));
    CHECK_THROWS_AS(reg::rbf_kernel(a, std::vector<double>{1.0, 2.0}, 0.5), flucast::DataError);
    CHECK_THROWS_AS(reg::rbf_kernel(a, b, 0.0), flucast::ConfigError);
}

TEST_CASE("constant targets give a constant model") {
    Eigen::MatrixXd X(6, 2);
    X << 0, 1, 1, 2, 2, 0, 3, 3, 4, 1, 5, 2;
    const Eigen::VectorXd y = Eigen::VectorXd::Constant(6, 0.37);
    const auto m = reg::svr_train(X, y, {10.0, 0.5, 0.1});
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        CHECK(predict_row(m, X, i) == Catch::Approx(0.37).margin(1e-12));
    }
    const std::vector<double> far{100.0, -50.0};
    CHECK(m.predict(far) == Catch::Approx(0.37).margin(1e-12));
    CHECK(m.dual_coeffs().size() == 0);
}

TEST_CASE("model without support vectors predicts its bias") {
    reg::SvrModel m(Eigen::MatrixXd(0, 2), Eigen::VectorXd(0), 0.25, {1.0, 1.0, 0.1}, {{0.0, 0.0}, {1.0, 1.0}}, 0.0,
                    1.0);
    CHECK(m.predict(std::vector<double>{3.0, 4.0}) == 0.25);
    CHECK_THROWS_AS(m.predict(std::vector<double>{3.0}), flucast::DataError);
}

TEST_CASE("linear toy problem") {
    Eigen::MatrixXd X(5, 1);
    X << -2, -1, 0, 1, 2;
    const Eigen::VectorXd y = X.col(0);
    const reg::SvrHyperparams hp{1e3, 0.5, 0.01};
    const auto m = reg::svr_train(X, y, hp);
    const double tube = hp.epsilon * m.target_scale();
    for (Eigen::Index i = 0; i < 5; ++i) {
        CHECK(std::abs(predict_row(m, X, i) - y[i]) <= tube + 1e-2);
    }
    CHECK(m.predict(std::vector<double>{1.5}) == Catch::Approx(1.5).margin(0.1));
}

TEST_CASE("dual solution matches the interior point oracle") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> nd(5, 40);
    std::uniform_int_distribution<int> dd(1, 8);
    std::uniform_real_distribution<double> logc(-1.0, 2.5);
    std::uniform_real_distribution<double> gam(0.05, 2.0);
    std::uniform_real_distribution<double> eps(0.0, 0.5);
    for (int rep = 0; rep < 30; ++rep) {
        const auto in = random_instance(rng, nd(rng), dd(rng));
        const reg::SvrHyperparams hp{std::pow(10.0, logc(rng)), gam(rng), eps(rng)};
        const auto K = reg::rbf_gram(in.X, hp.gamma);
        const auto sol = reg::solve_svr_dual(K, in.y, hp);
        const auto ref = oracle::solve_svr_dual_ipm(K, in.y, Eigen::VectorXd::Constant(in.y.size(), hp.C), hp.epsilon);
        REQUIRE(ref.converged);
        INFO("rep " << rep << " smo " << sol.objective << " ipm " << ref.objective);
        CHECK(std::abs(sol.objective - ref.objective) <= 1e-4 * std::max(std::abs(ref.objective), 1e-12));
        const auto theta = sol.coefficients();
        CHECK(std::abs(theta.sum()) <= 1e-8);
        CHECK(sol.alpha.minCoeff() >= -1e-8);
        CHECK(sol.alpha_star.minCoeff() >= -1e-8);
        CHECK(sol.alpha.maxCoeff() <= hp.C + 1e-8);
        CHECK(sol.alpha_star.maxCoeff() <= hp.C + 1e-8);
        const auto res = reg::kkt_residuals(K, in.y, sol.alpha, sol.alpha_star, sol.bias, hp);
        CHECK(res.maxCoeff() <= 1e-3);
    }
}

TEST_CASE("trained models respect the coefficient invariants") {
    std::mt19937 rng(5);
    for (int rep = 0; rep < 10; ++rep) {
        const auto in = random_instance(rng, 30, 4);
        const reg::SvrHyperparams hp{5.0, 0.3, 0.1};
        const auto m = reg::svr_train(in.X, in.y, hp);
        const auto& c = m.dual_coeffs();
        CHECK(std::abs(c.sum()) <= 1e-8);
        CHECK(c.cwiseAbs().maxCoeff() <= hp.C + 1e-12);
        CHECK(c.cwiseAbs().minCoeff() > 0.0);
    }
}

TEST_CASE("duplicating every row equals doubling the box on the deduplicated data") {
    std::mt19937 rng(17);
    for (int rep = 0; rep < 5; ++rep) {
        const auto in = random_instance(rng, 15, 3);
        Eigen::MatrixXd X2(30, 3);
        Eigen::VectorXd y2(30);
        X2 << in.X, in.X;
        y2 << in.y, in.y;
        const reg::SvrHyperparams hp{2.0, 0.4, 0.05};
        const auto dup = reg::svr_train(X2, y2, {hp.C, hp.gamma, hp.epsilon}, {1e-6, 10'000'000});
        // Duplication leaves the standardization unchanged.
        const auto prob = reg::standardize_training(in.X, in.y);
        const auto K = reg::rbf_gram(prob.X, hp.gamma);
        const auto ref = oracle::solve_svr_dual_ipm(K, prob.z, Eigen::VectorXd::Constant(15, 2.0 * hp.C), hp.epsilon);
        REQUIRE(ref.converged);
        const Eigen::VectorXd f = K * (ref.alpha - ref.alpha_star) + Eigen::VectorXd::Constant(15, ref.bias);
        for (Eigen::Index i = 0; i < 15; ++i) {
            const Eigen::VectorXd row = prob.X.row(i).transpose();
            // Map the standardized row back to the original feature scale.
            std::vector<double> x(3);
            for (int k = 0; k < 3; ++k) {
                x[k] = row[k] * prob.scaling.scale[k] + prob.scaling.mean[k];
            }
            const double want = f[i] * prob.target_scale + prob.target_mean;
            CHECK(dup.predict(x) == Catch::Approx(want).margin(1e-4));
        }
    }
}

TEST_CASE("predictions do not depend on training row order") {
    std::mt19937 rng(23);
    const auto in = random_instance(rng, 40, 5);
    const reg::SvrHyperparams hp{10.0, 0.2, 0.1};
    const auto a = reg::svr_train(in.X, in.y, hp);
    std::vector<int> perm(40);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::MatrixXd Xp(40, 5);
    Eigen::VectorXd yp(40);
    for (int i = 0; i < 40; ++i) {
        Xp.row(i) = in.X.row(perm[i]);
        yp[i] = in.y[perm[i]];
    }
    const auto b = reg::svr_train(Xp, yp, hp);
    const auto probe = random_instance(rng, 20, 5);
    for (Eigen::Index i = 0; i < 20; ++i) {
        CHECK(std::abs(predict_row(a, probe.X, i) - predict_row(b, probe.X, i)) <= 1e-9);
    }
}

TEST_CASE("invalid training input") {
    Eigen::MatrixXd X(3, 1);
    X << 0, 1, 2;
    Eigen::VectorXd y(3);
    y << 0, 1, std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(reg::svr_train(X, y, {}), flucast::DataError);
    CHECK_THROWS_AS(reg::svr_train(X, Eigen::VectorXd::Zero(2), {}), flucast::DataError);
    CHECK_THROWS_AS(reg::svr_train(X.topRows(1), Eigen::VectorXd::Zero(1), {}), flucast::DataError);
    CHECK_THROWS_AS(reg::svr_train(X, Eigen::VectorXd::Zero(3), {0.0, 1.0, 0.1}), flucast::ConfigError);
}

TEST_CASE("model JSON round trip keeps predictions") {
    std::mt19937 rng(8);
    const auto in = random_instance(rng, 25, 3);
    const auto m = reg::svr_train(in.X, in.y, {3.0, 0.5, 0.1});
    const auto back = reg::svr_model_from_json(nlohmann::json::parse(reg::to_json(m).dump()));
    for (Eigen::Index i = 0; i < in.X.rows(); ++i) {
        CHECK(predict_row(back, in.X, i) == predict_row(m, in.X, i));
    }
    CHECK_THROWS_AS(reg::svr_model_from_json(nlohmann::json::object()), flucast::DataError);
}
