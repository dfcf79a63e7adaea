#include "flucast/core/error.hpp"
#include "flucast/discovery/sentinel_set.hpp"

namespace flucast::discovery {

std::vector<core::Basket> SentinelSet::top(std::size_t n) const {
    std::vector<core::Basket> out;
    for (std::size_t i = 0; i < std::min(n, baskets.size()); ++i) {
        out.push_back(baskets[i].items);
    }
    return out;
}

nlohmann::json to_json(const SentinelSet& s) {
    nlohmann::json baskets = nlohmann::json::array();
    for (const auto& b : s.baskets) {
        baskets.push_back({{"items", b.items}, {"correlation", b.correlation}});
    }
    return {
        {"source_season", s.source_season.label()},
        {"peak_week", s.window.peak.to_string()},
        {"peak_window", {s.window.first.to_string(), s.window.last.to_string()}},
        {"truncated", s.truncated},
        {"baskets", baskets},
    };
}

SentinelSet sentinel_set_from_json(const nlohmann::json& j) {
    try {
        SentinelSet s;
        s.source_season = core::Season::parse(j.at("source_season").get<std::string>());
        const auto& w = j.at("peak_window");
        s.window = {core::WeekId::parse(j.at("peak_week").get<std::string>()),
                    core::WeekId::parse(w.at(0).get<std::string>()),
                    core::WeekId::parse(w.at(1).get<std::string>())};
        s.truncated = j.value("truncated", false);
        for (const auto& b : j.at("baskets")) {
            ScoredBasket sb{b.at("items").get<core::Basket>(), b.at("correlation").get<double>()};
            core::normalize_basket(sb.items);
            s.baskets.push_back(std::move(sb));
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed sentinel set JSON: ") + e.what());
    }
}

} // namespace flucast::discovery
