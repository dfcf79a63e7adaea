#include "flucast/cli/run_config.hpp"

#include "flucast/core/error.hpp"
#include "flucast/core/random.hpp"
#include "flucast/core/transaction_log.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace flucast::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T number(const std::string& key, const std::string& text) {
    const auto t = trim(text);
    T value{};
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError("option " + key + ": invalid number '" + text + "'");
    }
    return value;
}

bool boolean(const std::string& key, const std::string& text) {
    const auto t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") {
        return true;
    }
    if (t == "false" || t == "0" || t == "no" || t == "off") {
        return false;
    }
    throw ConfigError("option " + key + ": invalid boolean '" + text + "'");
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"paths.receipts", [](RunConfig& c, const auto&, const auto& v) { c.receipts = trim(v); }},
        {"paths.ili", [](RunConfig& c, const auto&, const auto& v) { c.ili = trim(v); }},
        {"paths.out", [](RunConfig& c, const auto&, const auto& v) { c.out = trim(v); }},
        {"data.ili_scale", [](RunConfig& c, const auto& k, const auto& v) { c.ili_scale = number<double>(k, v); }},
        {"synth.n_customers", [](RunConfig& c, const auto& k, const auto& v) { c.synth.n_customers = number<int>(k, v); }},
        {"synth.n_products", [](RunConfig& c, const auto& k, const auto& v) { c.synth.n_products = number<int>(k, v); }},
        {"synth.n_seasons", [](RunConfig& c, const auto& k, const auto& v) { c.synth.n_seasons = number<int>(k, v); }},
        {"synth.first_season_year",
         [](RunConfig& c, const auto& k, const auto& v) { c.synth.first_season_year = number<int>(k, v); }},
        {"synth.planted_basket",
         [](RunConfig& c, const auto&, const auto& v) {
             c.synth.planted_basket = parse_string_list(v);
             core::normalize_basket(c.synth.planted_basket);
         }},
        {"synth.plant_strength",
         [](RunConfig& c, const auto& k, const auto& v) { c.synth.plant_strength = number<double>(k, v); }},
        {"synth.noise_level",
         [](RunConfig& c, const auto& k, const auto& v) { c.synth.noise_level = number<double>(k, v); }},
        {"synth.affected_fraction",
         [](RunConfig& c, const auto& k, const auto& v) { c.synth.affected_fraction = number<double>(k, v); }},
        {"synth.n_confounders",
         [](RunConfig& c, const auto& k, const auto& v) { c.synth.n_confounders = number<int>(k, v); }},
        {"synth.visit_scale",
         [](RunConfig& c, const auto& k, const auto& v) { c.synth.visit_scale = number<double>(k, v); }},
        {"synth.mean_basket_length",
         [](RunConfig& c, const auto& k, const auto& v) { c.synth.mean_basket_length = number<double>(k, v); }},
        {"synth.ili_volatility",
         [](RunConfig& c, const auto& k, const auto& v) { c.synth.ili_volatility = number<double>(k, v); }},
        {"synth.ili_persistence",
         [](RunConfig& c, const auto& k, const auto& v) { c.synth.ili_persistence = number<double>(k, v); }},
        {"discovery.delta", [](RunConfig& c, const auto& k, const auto& v) { c.discovery.delta = number<double>(k, v); }},
        {"discovery.half_width",
         [](RunConfig& c, const auto& k, const auto& v) { c.discovery.half_width = number<int>(k, v); }},
        {"discovery.min_support",
         [](RunConfig& c, const auto& k, const auto& v) { c.discovery.min_support = number<double>(k, v); }},
        {"discovery.max_itemset_size",
         [](RunConfig& c, const auto& k, const auto& v) { c.discovery.max_itemset_size = number<std::size_t>(k, v); }},
        {"discovery.top_n", [](RunConfig& c, const auto& k, const auto& v) { c.discovery.top_n = number<std::size_t>(k, v); }},
        {"model.c_min", [](RunConfig& c, const auto& k, const auto& v) { c.grid.c_min = number<double>(k, v); }},
        {"model.c_max", [](RunConfig& c, const auto& k, const auto& v) { c.grid.c_max = number<double>(k, v); }},
        {"model.c_count", [](RunConfig& c, const auto& k, const auto& v) { c.grid.c_count = number<std::size_t>(k, v); }},
        {"model.gamma_min", [](RunConfig& c, const auto& k, const auto& v) { c.grid.gamma_min = number<double>(k, v); }},
        {"model.gamma_max", [](RunConfig& c, const auto& k, const auto& v) { c.grid.gamma_max = number<double>(k, v); }},
        {"model.gamma_count",
         [](RunConfig& c, const auto& k, const auto& v) { c.grid.gamma_count = number<std::size_t>(k, v); }},
        {"model.h_min", [](RunConfig& c, const auto& k, const auto& v) { c.grid.h_min = number<int>(k, v); }},
        {"model.h_max", [](RunConfig& c, const auto& k, const auto& v) { c.grid.h_max = number<int>(k, v); }},
        {"model.epsilon", [](RunConfig& c, const auto& k, const auto& v) { c.epsilon = number<double>(k, v); }},
        {"model.folds", [](RunConfig& c, const auto& k, const auto& v) { c.folds = number<std::size_t>(k, v); }},
        {"model.shuffled_folds", [](RunConfig& c, const auto& k, const auto& v) { c.shuffled_folds = boolean(k, v); }},
        {"model.tolerance", [](RunConfig& c, const auto& k, const auto& v) { c.tolerance = number<double>(k, v); }},
        {"model.fast_mode", [](RunConfig& c, const auto& k, const auto& v) { c.fast_mode = boolean(k, v); }},
        {"model.sentinel_transform",
         [](RunConfig& c, const auto&, const auto& v) { c.sentinel_transform = forecast::parse_sentinel_transform(v); }},
        {"model.horizons", [](RunConfig& c, const auto&, const auto& v) { c.horizons = parse_int_list(v); }},
        {"model.methods", [](RunConfig& c, const auto&, const auto& v) { c.methods = parse_string_list(v); }},
        {"model.eval_seasons", [](RunConfig& c, const auto&, const auto& v) { c.eval_seasons = parse_int_list(v); }},
        {"model.workers", [](RunConfig& c, const auto& k, const auto& v) { c.workers = number<std::size_t>(k, v); }},
        {"evaluation.threshold", [](RunConfig& c, const auto& k, const auto& v) { c.threshold = number<double>(k, v); }},
        {"evaluation.n_boot", [](RunConfig& c, const auto& k, const auto& v) { c.n_boot = number<std::size_t>(k, v); }},
        {"evaluation.mean_block_length",
         [](RunConfig& c, const auto& k, const auto& v) { c.mean_block_length = number<double>(k, v); }},
        {"evaluation.alpha", [](RunConfig& c, const auto& k, const auto& v) { c.alpha = number<double>(k, v); }},
        {"run.seed", [](RunConfig& c, const auto& k, const auto& v) { c.seed = number<std::uint64_t>(k, v); }},
    };
    return table;
}

} // namespace

regression::SearchGrid GridConfig::grid() const {
    regression::SearchGrid g;
    g.C = regression::SearchGrid::log_space(c_min, c_max, c_count);
    g.gamma = regression::SearchGrid::lin_space(gamma_min, gamma_max, gamma_count);
    for (int h = h_min; h <= h_max; ++h) {
        g.h.push_back(h);
    }
    return g;
}

std::filesystem::path RunConfig::receipts_path() const {
    return receipts.empty() ? out / "receipts.csv" : receipts;
}

std::filesystem::path RunConfig::ili_path() const {
    return ili.empty() ? out / "ili.csv" : ili;
}

forecast::RollingConfig RunConfig::rolling() const {
    forecast::RollingConfig r;
    r.horizons = horizons;
    r.grid = grid.grid();
    r.cv.folds = folds;
    r.cv.ordered = !shuffled_folds;
    r.cv.seed = core::derive_seed(seed, 2);
    r.cv.epsilon = epsilon;
    r.cv.solver.tolerance = tolerance;
    r.fast_mode = fast_mode;
    r.eval_threshold = threshold;
    r.sentinel_transform = sentinel_transform;
    return r;
}

metrics::EfficiencyCiOptions RunConfig::efficiency() const {
    return {n_boot, mean_block_length, alpha, core::derive_seed(seed, 1)};
}

void RunConfig::validate() const {
    if (!(ili_scale >= 1.0)) {
        throw ConfigError("data.ili_scale must be >= 1");
    }
    if (grid.h_min < 2 || grid.h_max > 6 || grid.h_min > grid.h_max) {
        throw ConfigError("model.h_min/h_max must satisfy 2 <= h_min <= h_max <= 6");
    }
    if (grid.c_count == 0 || grid.gamma_count == 0 || !(grid.c_min > 0.0) || grid.c_max < grid.c_min ||
        !(grid.gamma_min > 0.0) || grid.gamma_max < grid.gamma_min) {
        throw ConfigError("model grid bounds are invalid");
    }
    if (!(epsilon >= 0.0) || !(tolerance > 0.0) || folds < 2) {
        throw ConfigError("model.epsilon >= 0, model.tolerance > 0 and model.folds >= 2 are required");
    }
    if (horizons.empty()) {
        throw ConfigError("model.horizons is empty");
    }
    for (int k : horizons) {
        if (k < 1 || k > 4) {
            throw ConfigError("horizons must lie in [1, 4]");
        }
    }
    if (methods.empty()) {
        throw ConfigError("model.methods is empty");
    }
    for (const auto& m : methods) {
        forecast::Method::parse(m);
    }
    if (!(threshold >= 0.0) || !(alpha > 0.0 && alpha < 1.0) || !(mean_block_length >= 1.0) ||
        n_boot < 1000) {
        throw ConfigError("evaluation needs threshold >= 0, 0 < alpha < 1, mean_block_length >= 1, n_boot >= 1000");
    }
    if (!(discovery.delta >= 0.0 && discovery.delta < 1.0) || discovery.half_width < 0 || discovery.top_n == 0 ||
        !(discovery.min_support > 0.0 && discovery.min_support <= 1.0)) {
        throw ConfigError("discovery parameters are invalid");
    }
}

void set_option(RunConfig& cfg, const std::string& key, const std::string& value) {
    const auto it = setters().find(key);
    if (it == setters().end()) {
        throw ConfigError("unknown config option '" + key + "'");
    }
    it->second(cfg, key, value);
}

RunConfig parse_run_config(std::istream& in) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    RunConfig cfg;
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            throw ConfigError("config: key '" + section + "' outside a section");
        }
        for (const auto& [key, node] : body) {
            set_option(cfg, section + "." + key, node.data());
        }
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    return parse_run_config(in);
}

nlohmann::json to_json(const RunConfig& c) {
    return {
        {"paths", {{"receipts", c.receipts_path().string()}, {"ili", c.ili_path().string()}, {"out", c.out.string()}}},
        {"data", {{"ili_scale", c.ili_scale}}},
        {"synth", ingest::to_json(c.synth)},
        {"discovery",
         {{"delta", c.discovery.delta},
          {"half_width", c.discovery.half_width},
          {"min_support", c.discovery.min_support},
          {"max_itemset_size", c.discovery.max_itemset_size},
          {"top_n", c.discovery.top_n}}},
        {"model",
         {{"c_min", c.grid.c_min},
          {"c_max", c.grid.c_max},
          {"c_count", c.grid.c_count},
          {"gamma_min", c.grid.gamma_min},
          {"gamma_max", c.grid.gamma_max},
          {"gamma_count", c.grid.gamma_count},
          {"h_min", c.grid.h_min},
          {"h_max", c.grid.h_max},
          {"epsilon", c.epsilon},
          {"folds", c.folds},
          {"shuffled_folds", c.shuffled_folds},
          {"tolerance", c.tolerance},
          {"fast_mode", c.fast_mode},
          {"sentinel_transform", forecast::to_string(c.sentinel_transform)},
          {"horizons", c.horizons},
          {"methods", c.methods},
          {"eval_seasons", c.eval_seasons},
          {"workers", c.workers}}},
        {"evaluation",
         {{"threshold", c.threshold},
          {"n_boot", c.n_boot},
          {"mean_block_length", c.mean_block_length},
          {"alpha", c.alpha}}},
        {"run", {{"seed", c.seed}}},
    };
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (const auto& item : parse_string_list(text)) {
        out.push_back(number<int>("list", item));
    }
    return out;
}

std::vector<std::string> parse_string_list(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

} // namespace flucast::cli
