#include "flucast/ingest/synthetic.hpp"

#include "flucast/core/error.hpp"
#include "flucast/core/random.hpp"
#include "flucast/discovery/product_series.hpp"
#include "flucast/discovery/sentinels.hpp"
#include "flucast/ingest/csv_io.hpp"
#include "flucast/metrics/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace flucast::ingest {

namespace {

constexpr double kBaselineIli = 0.005;
constexpr double kPeakMin = 0.04;
constexpr double kPeakMax = 0.10;
// Peak position and width, in weeks from the season start.
constexpr double kPeakOffsetMin = 8.0;
constexpr double kPeakOffsetMax = 17.0;
constexpr double kWidthMin = 3.0;
constexpr double kWidthMax = 4.5;
// Planted purchase probability per affected customer-week is
// kPlantGain * plant_strength * ILI, so about 0.8 at the highest peak.
constexpr double kPlantGain = 8.0;
constexpr double kPlantItemProb = 0.9;
// Confounders follow one winter profile every season.
constexpr double kConfounderPeakProb = 0.4;
constexpr double kConfounderCenter = 11.0;
constexpr double kConfounderWidth = 6.0;
constexpr double kConfounderItemProb = 0.8;

std::string padded(char prefix, int value, int width) {
    std::string digits = std::to_string(value);
    if (static_cast<int>(digits.size()) < width) {
        digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
    }
    return prefix + digits;
}

int id_width(int n) {
    int w = 1;
    for (int v = std::max(n - 1, 1); v >= 10; v /= 10) {
        ++w;
    }
    return std::max(w, 3);
}

class ReceiptWriter {
public:
    explicit ReceiptWriter(std::vector<core::Receipt>& out) : out_(out) {}

    void emit(core::WeekId week, const core::CustomerId& customer, core::Basket basket) {
        core::normalize_basket(basket);
        if (basket.empty()) {
            return;
        }
        out_.push_back({week, customer, "R" + std::to_string(next_id_++), std::move(basket)});
    }

private:
    std::vector<core::Receipt>& out_;
    std::uint64_t next_id_ = 1;
};

} // namespace

void SynthConfig::validate() const {
    if (n_customers < 1) {
        throw ConfigError("n_customers must be positive");
    }
    if (n_products < 2) {
        throw ConfigError("n_products must be at least 2");
    }
    if (n_seasons < 2) {
        throw ConfigError("n_seasons must be at least 2: discovery needs a previous season");
    }
    if (!(plant_strength >= 0.0 && plant_strength <= 1.0)) {
        throw ConfigError("plant_strength must lie in [0, 1]");
    }
    if (!(noise_level >= 0.0)) {
        throw ConfigError("noise_level must be non-negative");
    }
    if (!(affected_fraction > 0.0 && affected_fraction <= 1.0)) {
        throw ConfigError("affected_fraction must lie in (0, 1]");
    }
    if (n_confounders < 0) {
        throw ConfigError("n_confounders must be non-negative");
    }
    if (!(visit_scale >= 0.0) || !(mean_basket_length >= 1.0)) {
        throw ConfigError("visit_scale must be >= 0 and mean_basket_length >= 1");
    }
    if (!(ili_volatility >= 0.0 && ili_volatility <= 1.0) || !(ili_persistence >= 0.0 && ili_persistence < 1.0)) {
        throw ConfigError("ili_volatility must lie in [0, 1] and ili_persistence in [0, 1)");
    }
    if (planted_basket.empty()) {
        throw ConfigError("planted basket must not be empty");
    }
    const int width = id_width(n_products);
    for (const auto& p : planted_basket) {
        bool found = false;
        for (int i = 0; i < n_products && !found; ++i) {
            found = padded('P', i, width) == p;
        }
        if (!found) {
            throw ConfigError("planted product " + p + " is not in the product universe");
        }
    }
    core::Basket b = planted_basket;
    if (core::normalize_basket(b).size() + static_cast<std::size_t>(n_confounders) >
        static_cast<std::size_t>(n_products)) {
        throw ConfigError("product universe too small for planted basket and confounders");
    }
}

SyntheticDataset generate_synthetic(const SynthConfig& cfg) {
    cfg.validate();
    core::Rng rng(cfg.rng_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const int pwidth = id_width(cfg.n_products);
    std::vector<core::ProductId> products;
    for (int i = 0; i < cfg.n_products; ++i) {
        products.push_back(padded('P', i, pwidth));
    }
    std::vector<core::CustomerId> customers;
    for (int i = 0; i < cfg.n_customers; ++i) {
        customers.push_back(padded('C', i, 5));
    }
    core::Basket planted = cfg.planted_basket;
    core::normalize_basket(planted);
    std::vector<core::ProductId> confounders;
    for (int i = cfg.n_products - 1; i >= 0 && static_cast<int>(confounders.size()) < cfg.n_confounders; --i) {
        if (!core::basket_contains(planted, products[i])) {
            confounders.push_back(products[i]);
        }
    }
    std::sort(confounders.begin(), confounders.end());

    const auto n_affected = static_cast<std::size_t>(
        std::max(1.0, std::round(cfg.affected_fraction * cfg.n_customers)));
    std::uniform_int_distribution<std::size_t> any_product(0, products.size() - 1);
    // std::poisson_distribution requires a positive mean.
    auto poisson = [&rng](double mean) {
        return mean > 0.0 ? std::poisson_distribution<int>(mean)(rng) : 0;
    };
    const double trip_rate = cfg.noise_level * cfg.visit_scale;

    auto random_items = [&](int count, core::Basket& into) {
        for (int i = 0; i < count; ++i) {
            into.push_back(products[any_product(rng)]);
        }
    };

    SyntheticDataset data{core::TransactionLog{}, core::WeeklySeries({cfg.first_season_year, 42}, {0.5}),
                          {}, confounders, {}};
    std::vector<core::Receipt> receipts;
    ReceiptWriter writer(receipts);
    std::vector<core::WeekId> all_weeks;
    std::vector<double> all_ili;

    for (int s = 0; s < cfg.n_seasons; ++s) {
        const core::Season season(cfg.first_season_year + s);
        const auto weeks = season.weeks();
        const double peak_offset = kPeakOffsetMin + (kPeakOffsetMax - kPeakOffsetMin) * unit(rng);
        const double width = kWidthMin + (kWidthMax - kWidthMin) * unit(rng);
        const double peak_value = kPeakMin + (kPeakMax - kPeakMin) * unit(rng);

        std::vector<std::size_t> order(customers.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<char> affected(customers.size(), 0);
        for (std::size_t i = 0; i < n_affected; ++i) {
            affected[order[i]] = 1;
        }

        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<double> log_shock(weeks.size());
        double e = cfg.ili_volatility / std::sqrt(1.0 - cfg.ili_persistence * cfg.ili_persistence) * normal(rng);
        for (auto& v : log_shock) {
            v = e;
            e = cfg.ili_persistence * e + cfg.ili_volatility * normal(rng);
        }

        std::vector<double> season_ili;
        for (std::size_t w = 0; w < weeks.size(); ++w) {
            const double d = (static_cast<double>(w) - peak_offset) / width;
            const double ili = kBaselineIli + (peak_value - kBaselineIli) * std::exp(-0.5 * d * d + log_shock[w]);
            const double dc = (static_cast<double>(w) - kConfounderCenter) / kConfounderWidth;
            const double confounder_prob = kConfounderPeakProb * std::exp(-0.5 * dc * dc);
            const double plant_prob = std::min(1.0, kPlantGain * cfg.plant_strength * ili);
            season_ili.push_back(ili);

            for (std::size_t c = 0; c < customers.size(); ++c) {
                const int n_trips = poisson(trip_rate);
                for (int t = 0; t < n_trips; ++t) {
                    core::Basket b;
                    random_items(1 + poisson(cfg.mean_basket_length - 1.0), b);
                    writer.emit(weeks[w], customers[c], std::move(b));
                }
                if (!confounders.empty() && unit(rng) < confounder_prob) {
                    core::Basket b;
                    for (const auto& p : confounders) {
                        if (unit(rng) < kConfounderItemProb) {
                            b.push_back(p);
                        }
                    }
                    if (b.empty()) {
                        b.push_back(confounders[any_product(rng) % confounders.size()]);
                    }
                    writer.emit(weeks[w], customers[c], std::move(b));
                }
                if (affected[c] && unit(rng) < plant_prob) {
                    core::Basket b;
                    for (const auto& p : planted) {
                        if (unit(rng) < kPlantItemProb) {
                            b.push_back(p);
                        }
                    }
                    if (b.empty()) {
                        b.push_back(planted[any_product(rng) % planted.size()]);
                    }
                    writer.emit(weeks[w], customers[c], std::move(b));
                }
            }
        }
        const auto peak_idx = static_cast<std::size_t>(
            std::max_element(season_ili.begin(), season_ili.end()) - season_ili.begin());
        data.seasons.push_back({season, weeks[peak_idx], season_ili[peak_idx], width});
        all_weeks.insert(all_weeks.end(), weeks.begin(), weeks.end());
        all_ili.insert(all_ili.end(), season_ili.begin(), season_ili.end());
    }

    data.log = core::TransactionLog(std::move(receipts));
    data.ili = core::WeeklySeries(std::move(all_weeks), std::move(all_ili));

    const core::Season first(cfg.first_season_year);
    const auto first_ili = data.ili.slice(first.start(), first.end());
    const auto table = discovery::build_product_series(data.log, first_ili.weeks(), products);
    const auto composite = discovery::composite_series(planted, table);
    double r = 0.0;
    if (!metrics::try_pearson_r(composite.values(), first_ili.values(), r)) {
        r = 0.0;
    }
    data.planted.baskets = {{planted, r}};
    data.planted.source_season = first;
    data.planted.window = discovery::find_peak_window(first_ili, 2);
    return data;
}

nlohmann::json to_json(const SynthConfig& cfg) {
    return {
        {"n_customers", cfg.n_customers},
        {"n_products", cfg.n_products},
        {"n_seasons", cfg.n_seasons},
        {"first_season_year", cfg.first_season_year},
        {"planted_basket", cfg.planted_basket},
        {"plant_strength", cfg.plant_strength},
        {"noise_level", cfg.noise_level},
        {"rng_seed", cfg.rng_seed},
        {"affected_fraction", cfg.affected_fraction},
        {"n_confounders", cfg.n_confounders},
        {"visit_scale", cfg.visit_scale},
        {"mean_basket_length", cfg.mean_basket_length},
        {"ili_volatility", cfg.ili_volatility},
        {"ili_persistence", cfg.ili_persistence},
    };
}

void write_synthetic(const std::filesystem::path& dir, const SyntheticDataset& data,
                     const SynthConfig& cfg) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());
    }
    write_receipts(dir / "receipts.csv", data.log);
    write_ili(dir / "ili.csv", data.ili, 1.0);

    nlohmann::json seasons = nlohmann::json::array();
    for (const auto& s : data.seasons) {
        seasons.push_back({{"season", s.season.label()},
                           {"peak_week", s.peak_week.to_string()},
                           {"peak_value", s.peak_value},
                           {"width_weeks", s.width_weeks}});
    }
    nlohmann::json truth = {
        {"config", to_json(cfg)},
        {"planted_basket", data.planted.baskets.front().items},
        {"planted", discovery::to_json(data.planted)},
        {"confounders", data.confounders},
        {"seasons", seasons},
    };
    std::ofstream out(dir / "ground_truth.json", std::ios::binary);
    if (!out) {
        throw DataError("cannot write " + (dir / "ground_truth.json").string());
    }
    out << truth.dump(2) << '\n';
}

} // namespace flucast::ingest
