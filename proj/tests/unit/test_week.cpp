#include "flucast/core/error.hpp"
#include "flucast/core/week.hpp"
#include "oracles/week_oracle.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using flucast::core::Season;
using flucast::core::WeekId;
namespace core = flucast::core;

TEST_CASE("week ids validate their week number") {
    CHECK_NOTHROW(WeekId(2015, 53));
    CHECK_THROWS_AS(WeekId(2014, 53), flucast::ConfigError);
    CHECK_THROWS_AS(WeekId(2014, 0), flucast::ConfigError);
    CHECK(core::iso_weeks_in_year(2015) == 53);
    CHECK(core::iso_weeks_in_year(2020) == 53);
    CHECK(core::iso_weeks_in_year(2014) == 52);
    CHECK_FALSE(core::is_valid_week(2014, 53));
}

TEST_CASE("week arithmetic crosses year ends") {
    CHECK(core::add_weeks({2015, 53}, 1) == WeekId(2016, 1));
    CHECK(core::add_weeks({2014, 52}, 1) == WeekId(2015, 1));
    CHECK(core::add_weeks({2016, 1}, -1) == WeekId(2015, 53));
    CHECK(core::weeks_between({2014, 42}, {2015, 17}) == 27);
    CHECK(core::week_range({2015, 52}, {2016, 2}).size() == 4);
}

TEST_CASE("parse and format round trip") {
    CHECK(WeekId::parse("2015-W07") == WeekId(2015, 7));
    CHECK(WeekId::parse("2015-07") == WeekId(2015, 7));
    CHECK(WeekId(2015, 7).to_string() == "2015-W07");
    CHECK_THROWS(WeekId::parse("2015/07"));
    CHECK_THROWS(WeekId::parse("2014-W53"));
}

TEST_CASE("serial numbering agrees with the C library's ISO week") {
    // Day 0 of the serial count is Monday 1970-01-05.
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> year(1902, 2037);
    std::uniform_int_distribution<int> month(1, 12);
    std::uniform_int_distribution<int> day(1, 28);
    for (int i = 0; i < 2000; ++i) {
        const int y = year(rng);
        const int m = month(rng);
        const int d = day(rng);
        const auto [iy, iw] = oracle::iso_week_of_date(y, m, d);
        const long days = oracle::days_from_civil_libc(y, m, d) - 4;
        const long serial = days >= 0 ? days / 7 : -((-days + 6) / 7);
        const WeekId w(iy, iw);
        REQUIRE(w.serial() == serial);
        REQUIRE(WeekId::from_serial(serial) == w);
    }
}

TEST_CASE("add_weeks is invertible and associative") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> off(-400, 400);
    for (int i = 0; i < 500; ++i) {
        const WeekId w = core::add_weeks({2010, 1}, off(rng));
        const int a = off(rng);
        const int b = off(rng);
        REQUIRE(core::add_weeks(core::add_weeks(w, a), -a) == w);
        REQUIRE(core::add_weeks(core::add_weeks(w, a), b) == core::add_weeks(w, a + b));
        REQUIRE(core::weeks_between(w, core::add_weeks(w, a)) == a);
    }
}

TEST_CASE("seasons run from week 42 to week 17") {
    const Season s(2014);
    CHECK(s.start() == WeekId(2014, 42));
    CHECK(s.end() == WeekId(2015, 17));
    CHECK(s.label() == "2014/15");
    CHECK(Season::parse("2014/15") == s);
    CHECK(s.length() == 28);
    CHECK(Season(2015).length() == 29);  // 2015 has 53 weeks
    CHECK(Season::containing({2015, 3}) == s);
    CHECK_FALSE(Season::containing({2015, 30}).has_value());
    CHECK(s.previous() == Season(2013));
}

TEST_CASE("timeline successor allows only the off-season jump") {
    CHECK(core::is_timeline_successor({2015, 3}, {2015, 4}));
    CHECK(core::is_timeline_successor({2015, 17}, {2015, 42}));
    CHECK(core::is_timeline_successor({2015, 17}, {2015, 18}));
    CHECK_FALSE(core::is_timeline_successor({2015, 17}, {2015, 43}));
    CHECK_FALSE(core::is_timeline_successor({2015, 16}, {2015, 42}));
    const auto t = core::season_timeline({Season(2013), Season(2014)});
    CHECK(t.size() == Season(2013).length() + Season(2014).length());
    CHECK_THROWS(core::season_timeline({Season(2012), Season(2014)}));
}
