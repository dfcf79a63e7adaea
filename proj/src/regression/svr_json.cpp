#include "flucast/core/error.hpp"
#include "flucast/regression/svr.hpp"

namespace flucast::regression {

nlohmann::json to_json(const SvrModel& model) {
    nlohmann::json sv = nlohmann::json::array();
    const auto& S = model.support_vectors();
    for (Eigen::Index i = 0; i < S.rows(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(S.cols()));
        for (Eigen::Index k = 0; k < S.cols(); ++k) {
            row[static_cast<std::size_t>(k)] = S(i, k);
        }
        sv.push_back(row);
    }
    const auto& c = model.dual_coeffs();
    const auto& hp = model.hyperparams();
    return {
        {"hyperparams", {{"C", hp.C}, {"gamma", hp.gamma}, {"epsilon", hp.epsilon}}},
        {"bias", model.bias()},
        {"dual_coeffs", std::vector<double>(c.data(), c.data() + c.size())},
        {"support_vectors", sv},
        {"feature_mean", model.feature_scaling().mean},
        {"feature_scale", model.feature_scaling().scale},
        {"target_mean", model.target_mean()},
        {"target_scale", model.target_scale()},
    };
}

SvrModel svr_model_from_json(const nlohmann::json& j) {
    try {
        SvrHyperparams hp{j.at("hyperparams").at("C").get<double>(),
                          j.at("hyperparams").at("gamma").get<double>(),
                          j.at("hyperparams").at("epsilon").get<double>()};
        FeatureScaling scaling{j.at("feature_mean").get<std::vector<double>>(),
                               j.at("feature_scale").get<std::vector<double>>()};
        const auto coeffs = j.at("dual_coeffs").get<std::vector<double>>();
        const auto rows = j.at("support_vectors").get<std::vector<std::vector<double>>>();
        const auto d = static_cast<Eigen::Index>(scaling.mean.size());
        Eigen::MatrixXd sv(static_cast<Eigen::Index>(rows.size()), d);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (static_cast<Eigen::Index>(rows[i].size()) != d) {
                throw DataError("SVR model JSON: support vector has wrong dimension");
            }
            for (Eigen::Index k = 0; k < d; ++k) {
                sv(static_cast<Eigen::Index>(i), k) = rows[i][static_cast<std::size_t>(k)];
            }
        }
        Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
        return SvrModel(std::move(sv), std::move(c), j.at("bias").get<double>(), hp, std::move(scaling),
                        j.at("target_mean").get<double>(), j.at("target_scale").get<double>());
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed SVR model JSON: ") + e.what());
    }
}

} // namespace flucast::regression
