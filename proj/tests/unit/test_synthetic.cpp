#include "flucast/core/error.hpp"
#include "flucast/ingest/csv_io.hpp"
#include "flucast/ingest/synthetic.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace ingest = flucast::ingest;

namespace {

ingest::SynthConfig small() {
    ingest::SynthConfig c;
    c.n_customers = 150;
    c.n_products = 40;
    c.n_seasons = 2;
    c.affected_fraction = 0.2;
    return c;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("synthetic data is deterministic for a seed") {
    const auto a = ingest::generate_synthetic(small());
    const auto b = ingest::generate_synthetic(small());
    std::stringstream sa, sb;
    ingest::write_receipts(sa, a.log);
    ingest::write_receipts(sb, b.log);
    CHECK(sa.str() == sb.str());
    CHECK(a.ili == b.ili);
    auto other = small();
    other.rng_seed = 43;
    CHECK_FALSE(ingest::generate_synthetic(other).ili == a.ili);
}

TEST_CASE("synthetic ILI covers the seasons with rates in (0, 1)") {
    const auto d = ingest::generate_synthetic(small());
    CHECK(d.ili.first_week() == flucast::core::WeekId(2011, 42));
    CHECK(d.ili.last_week() == flucast::core::WeekId(2013, 17));
    for (double v : d.ili.values()) {
        REQUIRE(v > 0.0);
        REQUIRE(v < 1.0);
    }
    CHECK(d.seasons.size() == 2);
    CHECK(d.confounders.size() == 3);
    CHECK(d.planted.baskets.front().items == flucast::core::Basket{"P010", "P011", "P012"});
    CHECK(d.planted.baskets.front().correlation > 0.5);
}

TEST_CASE("written files agree with the log") {
    const auto dir = std::filesystem::temp_directory_path() / "flucast_synth_test";
    std::filesystem::remove_all(dir);
    const auto cfg = small();
    const auto d = ingest::generate_synthetic(cfg);
    ingest::write_synthetic(dir, d, cfg);
    // Recount: one CSV row per (receipt, product) membership.
    std::ifstream in(dir / "receipts.csv");
    std::string line;
    std::size_t rows = 0;
    std::getline(in, line);
    while (std::getline(in, line)) {
        rows += line.empty() ? 0 : 1;
    }
    CHECK(rows == d.log.membership_count());
    CHECK(ingest::parse_receipts(dir / "receipts.csv").membership_count() == d.log.membership_count());
    CHECK(ingest::parse_ili(dir / "ili.csv", 1.0).size() == d.ili.size());
    CHECK(slurp(dir / "ground_truth.json").find("\"planted_basket\"") != std::string::npos);
}

TEST_CASE("invalid synthetic configurations") {
    auto c = small();
    c.n_seasons = 1;
    CHECK_THROWS_AS(ingest::generate_synthetic(c), flucast::ConfigError);
    c = small();
    c.planted_basket = {"P999"};
    CHECK_THROWS_AS(ingest::generate_synthetic(c), flucast::ConfigError);
    c = small();
    c.plant_strength = 1.5;
    CHECK_THROWS_AS(ingest::generate_synthetic(c), flucast::ConfigError);
}

TEST_CASE("zero noise still produces planted receipts") {
    auto c = small();
    c.noise_level = 0.0;
    const auto d = ingest::generate_synthetic(c);
    CHECK(d.log.size() > 0);
}
