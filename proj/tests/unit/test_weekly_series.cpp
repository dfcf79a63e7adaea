#include "flucast/core/error.hpp"
#include "flucast/core/weekly_series.hpp"

#include <catch_amalgamated.hpp>

using flucast::core::Season;
using flucast::core::WeekId;
using flucast::core::WeeklySeries;
namespace core = flucast::core;

TEST_CASE("contiguous construction and lookup") {
    WeeklySeries s({2015, 52}, {1, 2, 3, 4});
    CHECK(s.size() == 4);
    CHECK(s.last_week() == WeekId(2016, 2));
    CHECK(s.at({2016, 1}) == 3);
    CHECK(s.index_of({2015, 53}) == 1u);
    CHECK_THROWS_AS(s.at({2016, 3}), flucast::DataError);
    CHECK_THROWS(WeeklySeries({2015, 1}, {}));
}

TEST_CASE("glued seasons are a valid timeline, other gaps are not") {
    const auto weeks = core::season_timeline({Season(2013), Season(2014)});
    std::vector<double> v(weeks.size(), 1.0);
    CHECK_NOTHROW(WeeklySeries(weeks, v));
    auto broken = weeks;
    broken.erase(broken.begin() + 3);
    CHECK_THROWS_AS(WeeklySeries(broken, std::vector<double>(broken.size(), 1.0)), flucast::DataError);
    auto unsorted = weeks;
    std::swap(unsorted[0], unsorted[1]);
    CHECK_THROWS(WeeklySeries(unsorted, v));
}

TEST_CASE("slice and align") {
    WeeklySeries a({2015, 1}, {1, 2, 3, 4, 5});
    WeeklySeries b({2015, 3}, {30, 40, 50, 60});
    const auto [x, y] = core::align(a, b);
    CHECK(x.values() == std::vector<double>{3, 4, 5});
    CHECK(y.values() == std::vector<double>{30, 40, 50});
    CHECK(a.slice({2015, 2}, {2015, 3}).values() == std::vector<double>{2, 3});
    WeeklySeries c({2016, 1}, {1});
    CHECK_THROWS_AS(core::align(a, c), flucast::DataError);
}

TEST_CASE("on-season weeks use a strict threshold") {
    WeeklySeries s({2015, 1}, {0.01, 0.02, 0.03, 0.05, 0.02});
    const auto w = core::on_season_weeks(s, 0.02);
    REQUIRE(w.size() == 2);
    CHECK(w[0] == WeekId(2015, 3));
    CHECK_THROWS(core::on_season_weeks(s, -1.0));
}

TEST_CASE("sum of series") {
    std::vector<WeeklySeries> parts{WeeklySeries({2015, 1}, {1, 2}), WeeklySeries({2015, 1}, {10, 20})};
    CHECK(core::sum_series(parts).values() == std::vector<double>{11, 22});
    parts.push_back(WeeklySeries({2015, 2}, {1, 1}));
    CHECK_THROWS(core::sum_series(parts));
}
