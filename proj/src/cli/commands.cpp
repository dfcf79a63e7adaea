#include "flucast/cli/commands.hpp"

#include "flucast/core/error.hpp"
#include "flucast/core/parallel.hpp"
#include "flucast/discovery/product_series.hpp"
#include "flucast/forecast/report_io.hpp"
#include "flucast/ingest/csv_io.hpp"
#include "flucast/ingest/synthetic.hpp"
#include "flucast/metrics/tables.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

namespace flucast::cli {

namespace {

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
    }
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
}

nlohmann::json file_entry(const std::filesystem::path& path) {
    return {{"path", path.string()}, {"sha256", sha256_file(path)}};
}

void write_manifest(const RunConfig& cfg, const std::string& command,
                    const std::vector<std::filesystem::path>& inputs,
                    const std::vector<std::filesystem::path>& outputs,
                    const std::vector<std::string>& warnings, nlohmann::json extra = nlohmann::json::object()) {
    nlohmann::json in = nlohmann::json::array();
    for (const auto& p : inputs) {
        in.push_back(file_entry(p));
    }
    nlohmann::json out = nlohmann::json::array();
    for (const auto& p : outputs) {
        out.push_back(file_entry(p));
    }
    nlohmann::json m = {
        {"command", command}, {"config", to_json(cfg)}, {"seed", cfg.seed},
        {"inputs", in},       {"outputs", out},         {"warnings", warnings},
    };
    if (!extra.empty()) {
        m["details"] = std::move(extra);
    }
    write_text(cfg.out / ("manifest_" + command + ".json"), m.dump(2) + "\n");
}

struct Inputs {
    core::TransactionLog log;
    core::WeeklySeries ili;
};

Inputs load_inputs(const RunConfig& cfg) {
    return {ingest::parse_receipts(cfg.receipts_path()), ingest::parse_ili(cfg.ili_path(), cfg.ili_scale)};
}

ingest::SynthConfig synth_config(const RunConfig& cfg) {
    auto s = cfg.synth;
    s.rng_seed = cfg.seed;
    return s;
}

void apply_workers(const RunConfig& cfg) {
    core::parallel_workers() = cfg.workers;
}

std::string describe_report(int season, const discovery::DiscoveryReport& r) {
    std::ostringstream out;
    out << "season " << core::Season(season).label() << " (learned from "
        << r.sentinels.source_season.label() << ")\n"
        << "  products: " << r.n_products << "\n"
        << "  sentinel products: " << r.n_sentinel_products << "\n"
        << "  sentinel customers: " << r.n_sentinel_customers << "\n"
        << "  peak window: " << r.sentinels.window.first.to_string() << " .. "
        << r.sentinels.window.last.to_string() << " (peak " << r.sentinels.window.peak.to_string() << ")\n"
        << "  basket pool: " << r.pool_size << "\n"
        << "  frequent baskets: " << r.n_frequent << "\n";
    for (std::size_t i = 0; i < r.sentinels.baskets.size(); ++i) {
        const auto& b = r.sentinels.baskets[i];
        out << "  #" << i + 1 << " r=" << std::fixed << std::setprecision(4) << b.correlation << " {";
        for (std::size_t j = 0; j < b.items.size(); ++j) {
            out << (j ? "," : "") << b.items[j];
        }
        out << "}\n";
    }
    if (r.sentinels.truncated) {
        out << "  note: fewer baskets than requested\n";
    }
    return out.str();
}

} // namespace

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 initialisation failed");
    }
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) {
            EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
        }
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    }
    return hex.str();
}

std::vector<core::Season> evaluation_seasons(const core::WeeklySeries& ili, const RunConfig& cfg) {
    std::set<int> present;
    for (const auto& w : ili.weeks()) {
        if (const auto s = core::Season::containing(w)) {
            present.insert(s->start_year());
        }
    }
    std::vector<core::Season> out;
    if (cfg.eval_seasons.empty()) {
        for (int y : present) {
            if (present.count(y - 1)) {
                out.emplace_back(y);
            }
        }
    } else {
        for (int y : cfg.eval_seasons) {
            if (!present.count(y) || !present.count(y - 1)) {
                throw DataError("season " + core::Season(y).label() + " or its predecessor is not in the ILI data");
            }
            out.emplace_back(y);
        }
    }
    if (out.empty()) {
        throw DataError("the ILI data needs at least two consecutive seasons");
    }
    return out;
}

core::WeeklySeries season_slice(const core::WeeklySeries& ili, core::Season season) {
    std::vector<core::WeekId> weeks;
    std::vector<double> values;
    for (std::size_t i = 0; i < ili.size(); ++i) {
        if (season.contains(ili.week_at(i))) {
            weeks.push_back(ili.week_at(i));
            values.push_back(ili.value_at(i));
        }
    }
    if (weeks.empty()) {
        throw DataError("no ILI data for season " + season.label());
    }
    return {std::move(weeks), std::move(values)};
}

void cmd_synth(const RunConfig& cfg) {
    cfg.validate();
    const auto s = synth_config(cfg);
    if (s.n_seasons < 2) {
        throw ConfigError("synth.n_seasons must be at least 2: discovery needs a previous season");
    }
    ensure_dir(cfg.out);
    const auto data = ingest::generate_synthetic(s);
    ingest::write_synthetic(cfg.out, data, s);
    write_manifest(cfg, "synth", {},
                   {cfg.out / "receipts.csv", cfg.out / "ili.csv", cfg.out / "ground_truth.json"}, {});
}

nlohmann::json sentinel_sets_json(const DiscoveryOutput& out) {
    nlohmann::json seasons = nlohmann::json::array();
    for (const auto& [year, report] : out.by_season) {
        seasons.push_back({{"season", core::Season(year).label()}, {"sentinels", discovery::to_json(report.sentinels)}});
    }
    return {{"seasons", seasons}};
}

std::map<int, discovery::SentinelSet> read_sentinel_sets(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("missing sentinel set file " + path.string() + " (run discover first)");
    }
    std::map<int, discovery::SentinelSet> out;
    try {
        const auto j = nlohmann::json::parse(in);
        for (const auto& entry : j.at("seasons")) {
            const auto season = core::Season::parse(entry.at("season").get<std::string>());
            out.emplace(season.start_year(), discovery::sentinel_set_from_json(entry.at("sentinels")));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    } catch (const ConfigError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return out;
}

DiscoveryOutput cmd_discover(const RunConfig& cfg) {
    cfg.validate();
    apply_workers(cfg);
    ensure_dir(cfg.out);
    const auto in = load_inputs(cfg);
    DiscoveryOutput result;
    std::string text;
    for (const auto& season : evaluation_seasons(in.ili, cfg)) {
        const auto prev = season_slice(in.ili, season.previous());
        auto report = discovery::discover_with_report(in.log, prev, cfg.discovery);
        text += describe_report(season.start_year(), report);
        result.by_season.emplace(season.start_year(), std::move(report));
    }
    write_text(cfg.out / "sentinel_set.json", sentinel_sets_json(result).dump(2) + "\n");
    write_text(cfg.out / "discovery_report.txt", text);
    write_manifest(cfg, "discover", {cfg.receipts_path(), cfg.ili_path()},
                   {cfg.out / "sentinel_set.json", cfg.out / "discovery_report.txt"}, {});
    return result;
}

ForecastOutput cmd_forecast(const RunConfig& cfg) {
    cfg.validate();
    apply_workers(cfg);
    ensure_dir(cfg.out);
    const auto in = load_inputs(cfg);
    const auto seasons = evaluation_seasons(in.ili, cfg);

    std::vector<forecast::Method> methods;
    bool need_sets = false;
    for (const auto& name : cfg.methods) {
        methods.push_back(forecast::Method::parse(name));
        need_sets = need_sets || methods.back().kind == forecast::MethodKind::basket;
    }
    std::vector<std::filesystem::path> inputs{cfg.receipts_path(), cfg.ili_path()};
    std::map<int, discovery::SentinelSet> sets;
    if (need_sets) {
        sets = read_sentinel_sets(cfg.out / "sentinel_set.json");
        inputs.push_back(cfg.out / "sentinel_set.json");
    }
    const auto table = discovery::build_product_series(in.log, in.ili.weeks());

    ForecastOutput result;
    std::vector<forecast::ForecastReport> parts;
    std::vector<std::string> warnings;
    const auto rolling = cfg.rolling();
    for (const auto& method : methods) {
        forecast::SeasonInputs season_inputs;
        for (const auto& season : seasons) {
            const int y = season.start_year();
            if (method.kind == forecast::MethodKind::basket) {
                const auto it = sets.find(y);
                if (it == sets.end()) {
                    throw DataError("sentinel_set.json has no entry for season " + season.label());
                }
                auto series = forecast::basket_inputs(it->second, method.n_baskets, table);
                if (series.empty()) {
                    throw DataError("no sentinel baskets for season " + season.label());
                }
                if (series.size() < method.n_baskets) {
                    warnings.push_back(method.name() + " " + season.label() + ": only " +
                                       std::to_string(series.size()) + " sentinel baskets available");
                }
                season_inputs.emplace(y, std::move(series));
            } else if (method.kind == forecast::MethodKind::product5) {
                auto p5 = forecast::product5_series(in.log, season_slice(in.ili, season.previous()), table);
                for (auto& w : p5.warnings) {
                    warnings.push_back(season.label() + " " + w);
                }
                result.product5[y] = p5.products;
                season_inputs.emplace(y, std::vector<core::WeeklySeries>{p5.series});
            }
        }
        parts.push_back(forecast::run_rolling_forecast(method, in.ili, season_inputs, seasons, rolling));
    }
    result.report = forecast::merge_reports(std::move(parts));
    warnings.insert(warnings.end(), result.report.warnings.begin(), result.report.warnings.end());

    forecast::write_forecast_csv(cfg.out / "forecast.csv", result.report);
    {
        auto out = open_out(cfg.out / "models.csv");
        forecast::write_models_csv(out, result.report);
    }
    const auto rows = forecast::summary_rows(result.report.records);
    write_text(cfg.out / "forecast_summary.json", forecast::summary_json(rows).dump(2) + "\n");

    nlohmann::json details = nlohmann::json::object();
    nlohmann::json p5 = nlohmann::json::object();
    for (const auto& [y, products] : result.product5) {
        p5[core::Season(y).label()] = products;
    }
    details["product5"] = p5;
    write_manifest(cfg, "forecast", inputs, {cfg.out / "forecast.csv", cfg.out / "models.csv", cfg.out / "forecast_summary.json"},
                   warnings, details);
    return result;
}

void cmd_evaluate(const RunConfig& cfg) {
    cfg.validate();
    apply_workers(cfg);
    ensure_dir(cfg.out);
    const auto path = cfg.out / "forecast.csv";
    const auto records = forecast::read_forecast_csv(path);
    const auto horizons = forecast::horizons_of(records);
    const auto rows = forecast::summary_rows(records);
    const auto eff = forecast::efficiency_rows(records, "autoreg", cfg.efficiency());
    {
        auto out = open_out(cfg.out / "summary.csv");
        metrics::write_summary_csv(out, rows, horizons);
    }
    {
        auto out = open_out(cfg.out / "efficiency.csv");
        metrics::write_efficiency_csv(out, eff, horizons);
    }
    write_text(cfg.out / "summary.json", forecast::summary_json(rows).dump(2) + "\n");
    write_manifest(cfg, "evaluate", {path},
                   {cfg.out / "summary.csv", cfg.out / "efficiency.csv", cfg.out / "summary.json"}, {});
}

void cmd_run(const RunConfig& cfg) {
    cmd_synth(cfg);
    cmd_discover(cfg);
    cmd_forecast(cfg);
    cmd_evaluate(cfg);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Influenza forecasting from retail sentinel baskets"};
    app.require_subcommand(1);
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string horizons;
    std::string methods;
    std::string out_dir;
    bool fast = false;
    std::vector<std::string> overrides;
    std::vector<CLI::App*> subs;
    for (const char* name : {"synth", "discover", "forecast", "evaluate", "run"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "INI configuration file");
        sub->add_option("--seed", seed, "master seed");
        sub->add_option("--horizons", horizons, "comma-separated horizons");
        sub->add_option("--methods", methods, "comma-separated methods");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_flag("--fast", fast, "reuse hyperparameters within a season");
        sub->add_option("--set", overrides, "section.key=value override");
        subs.push_back(sub);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            cfg = load_run_config(config_path);
        }
        for (const auto& o : overrides) {
            const auto eq = o.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("--set expects section.key=value, got '" + o + "'");
            }
            set_option(cfg, o.substr(0, eq), o.substr(eq + 1));
        }
        if (seed) {
            cfg.seed = *seed;
        }
        if (!horizons.empty()) {
            cfg.horizons = parse_int_list(horizons);
        }
        if (!methods.empty()) {
            cfg.methods = parse_string_list(methods);
        }
        if (!out_dir.empty()) {
            cfg.out = out_dir;
        }
        if (fast) {
            cfg.fast_mode = true;
        }
        const std::string command = app.get_subcommands().front()->get_name();
        if (command == "synth") {
            cmd_synth(cfg);
        } else if (command == "discover") {
            cmd_discover(cfg);
        } else if (command == "forecast") {
            cmd_forecast(cfg);
        } else if (command == "evaluate") {
            cmd_evaluate(cfg);
        } else {
            cmd_run(cfg);
        }
        out << command << ": wrote " << cfg.out.string() << '\n';
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
}

} // namespace flucast::cli
