#include "flucast/cli/commands.hpp"
#include "flucast/cli/run_config.hpp"
#include "flucast/core/error.hpp"
#include "flucast/forecast/report_io.hpp"
#include "flucast/ingest/csv_io.hpp"

#include <catch_amalgamated.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
namespace cli = flucast::cli;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("flucast_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path small_config(const fs::path& dir) {
    const auto ini = dir / "run.ini";
    std::ofstream(ini) << "[synth]\n"
                          "n_customers = 300\n"
                          "n_seasons = 3\n"
                          "[model]\n"
                          "c_count = 2\n"
                          "gamma_count = 2\n"
                          "h_max = 3\n"
                          "horizons = 1,2\n"
                          "fast_mode = true\n"
                          "[run]\n"
                          "seed = 5\n";
    return ini;
}

int run(std::vector<std::string> args, std::string* err_text = nullptr) {
    args.insert(args.begin(), "flucast");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (err_text) {
        *err_text = err.str();
    }
    return code;
}

} // namespace

TEST_CASE("usage and configuration errors exit with 1") {
    const auto dir = scratch("usage");
    CHECK(run({}) == 1);
    CHECK(run({"bogus"}) == 1);
    CHECK(run({"synth", "--out", dir.string(), "--set", "synth.n_seasons=1"}) == 1);
    CHECK(run({"synth", "--out", dir.string(), "--set", "nosuch.key=1"}) == 1);
    CHECK(run({"synth", "--out", dir.string(), "--set", "novalue"}) == 1);
    CHECK(run({"synth", "--config", (dir / "missing.ini").string()}) == 1);
    std::ofstream(dir / "bad.ini") << "[model]\nepsilon = abc\n";
    CHECK(run({"synth", "--config", (dir / "bad.ini").string()}) == 1);
}

TEST_CASE("config defaults and overrides") {
    const cli::RunConfig d;
    CHECK(d.discovery.delta == 0.2);
    CHECK(d.discovery.half_width == 2);
    CHECK(d.threshold == 0.02);
    CHECK(d.mean_block_length == 14.0);
    CHECK(d.horizons == std::vector<int>{1, 2, 3, 4});
    const auto dir = scratch("config");
    const auto cfg = cli::load_run_config(small_config(dir));
    CHECK(cfg.synth.n_customers == 300);
    CHECK(cfg.horizons == std::vector<int>{1, 2});
    CHECK(cfg.seed == 5);
    CHECK(cfg.fast_mode);
    const auto j = cli::to_json(cfg);
    CHECK(j["model"]["c_count"] == 2);
    CHECK(j["run"]["seed"] == 5);
}

TEST_CASE("pipeline stages, reproducibility and manifests") {
    const auto dir = scratch("pipeline");
    const auto ini = small_config(dir);
    const auto a = dir / "a";
    const auto b = dir / "b";
    REQUIRE(run({"synth", "--config", ini.string(), "--out", a.string()}) == 0);
    REQUIRE(run({"synth", "--config", ini.string(), "--out", b.string()}) == 0);
    CHECK(slurp(a / "receipts.csv") == slurp(b / "receipts.csv"));
    CHECK(slurp(a / "ili.csv") == slurp(b / "ili.csv"));

    // Receipt rows equal the total receipt-product membership.
    const auto log = flucast::ingest::parse_receipts(a / "receipts.csv");
    std::size_t members = 0;
    for (const auto& r : log.receipts()) {
        members += r.basket.size();
    }
    std::ifstream rin(a / "receipts.csv");
    std::size_t lines = 0;
    for (std::string line; std::getline(rin, line);) {
        ++lines;
    }
    CHECK(lines == members + 1);

    // Basket methods need a sentinel set.
    std::string err;
    CHECK(run({"forecast", "--config", ini.string(), "--out", a.string(), "--methods", "basket_1"}, &err) == 2);

    REQUIRE(run({"discover", "--config", ini.string(), "--out", a.string()}) == 0);
    const auto first = slurp(a / "sentinel_set.json");
    REQUIRE(run({"discover", "--config", ini.string(), "--out", a.string()}) == 0);
    CHECK(slurp(a / "sentinel_set.json") == first);
    CHECK(run({"discover", "--config", ini.string(), "--out", a.string(), "--set", "discovery.delta=0.99"}, &err) != 0);
    CHECK(err.find("sentinel products") != std::string::npos);
    REQUIRE(run({"discover", "--config", ini.string(), "--out", a.string()}) == 0);

    REQUIRE(run({"forecast", "--config", ini.string(), "--out", a.string(), "--methods", "autoreg", "--horizons", "1"}) == 0);
    const auto records = flucast::forecast::read_forecast_csv(a / "forecast.csv");
    const auto ili = flucast::ingest::parse_ili(a / "ili.csv", 1.0);
    std::size_t on_season = 0;
    for (std::size_t i = 0; i < ili.size(); ++i) {
        on_season += ili.week_at(i) >= flucast::core::Season(2012).start() && ili.value_at(i) > 0.02;
    }
    CHECK(records.size() == on_season);

    REQUIRE(run({"evaluate", "--config", ini.string(), "--out", a.string()}) == 0);
    std::ifstream eff(a / "efficiency.csv");
    std::string header, row;
    std::getline(eff, header);
    CHECK_FALSE(std::getline(eff, row));

    const auto manifest = nlohmann::json::parse(slurp(a / "manifest_forecast.json"));
    CHECK(manifest["command"] == "forecast");
    CHECK(manifest["seed"] == 5);
    CHECK(manifest["config"]["synth"]["n_customers"] == 300);
    REQUIRE(!manifest["inputs"].empty());
    for (const auto& f : manifest["inputs"]) {
        CHECK(f["sha256"] == cli::sha256_file(f["path"].get<std::string>()));
    }

}

TEST_CASE("basket_5 with three baskets proceeds with a warning") {
    const auto dir = scratch("degrade");
    const auto ini = small_config(dir);
    REQUIRE(run({"synth", "--config", ini.string(), "--out", dir.string()}) == 0);
    REQUIRE(run({"discover", "--config", ini.string(), "--out", dir.string(), "--set", "discovery.top_n=3"}) == 0);
    REQUIRE(run({"forecast", "--config", ini.string(), "--out", dir.string(), "--methods", "basket_5", "--horizons",
                 "1"}) == 0);
    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest_forecast.json"));
    bool warned = false;
    for (const auto& w : manifest["warnings"]) {
        warned = warned || w.get<std::string>().find("only 3 sentinel baskets") != std::string::npos;
    }
    CHECK(warned);
}

TEST_CASE("duplicated predictions under two names give unit efficiency") {
    const auto dir = scratch("dup");
    std::ofstream f(dir / "forecast.csv");
    f << flucast::forecast::kForecastHeader << '\n';
    const double truth[] = {0.03, 0.05, 0.04, 0.06, 0.035};
    const double pred[] = {0.032, 0.047, 0.043, 0.058, 0.04};
    for (const char* m : {"autoreg", "copy"}) {
        for (int i = 0; i < 5; ++i) {
            f << m << ",1,2012," << 48 + i << ',' << truth[i] << ',' << pred[i] << ",1\n";
        }
    }
    f.close();
    REQUIRE(run({"evaluate", "--out", dir.string()}) == 0);
    std::ifstream eff(dir / "efficiency.csv");
    std::string header, row;
    std::getline(eff, header);
    REQUIRE(std::getline(eff, row));
    CHECK(row.rfind("copy,autoreg,1,", 0) == 0);

    std::ofstream(dir / "forecast.csv") << "garbage\n";
    CHECK(run({"evaluate", "--out", dir.string()}) == 2);
}
