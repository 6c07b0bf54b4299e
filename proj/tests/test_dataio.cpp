#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "rulkit/dataio.hpp"
#include "rulkit/errors.hpp"
#include "support/temp_dir.hpp"

using namespace rulkit;
using testsupport::TempDir;

namespace {

std::filesystem::path write_csv(const TempDir& dir, const std::string& name,
                                const std::string& content) {
    const auto path = dir.path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

} // namespace

TEST_CASE("rated capacity maps to one hundred percent") {
    TempDir dir("dataio");
    const auto p = write_csv(dir, "B0001.csv", "cycle,capacity_ah\n1,2.0\n2,1.9\n");
    const DegradationSeries s = load_capacity(p);
    CHECK(s.battery_id == "B0001");
    CHECK(s.hi[0] == doctest::Approx(100.0));
    CHECK(s.hi[1] == doctest::Approx(95.0));
    CHECK_FALSE(s.failure_cycle.has_value());
}

TEST_CASE("the 1.4 Ah fade endpoint sits exactly on the threshold") {
    TempDir dir("dataio");
    const auto p = write_csv(dir, "B0002.csv", "cycle,capacity_ah\n1,2.0\n2,1.5\n3,1.4\n4,1.38\n");
    const DegradationSeries s = load_capacity(p);
    CHECK(s.hi[2] == doctest::Approx(70.0));
    REQUIRE(s.failure_cycle.has_value());
    CHECK(*s.failure_cycle == 3);
}

TEST_CASE("rows may arrive unsorted") {
    TempDir dir("dataio");
    const auto p = write_csv(dir, "B0003.csv", "cycle,capacity_ah\n2,1.9\n1,2.0\n3,1.8\n");
    const DegradationSeries s = load_capacity(p);
    CHECK(s.cycles == std::vector<int>{1, 2, 3});
    CHECK(s.hi[0] == doctest::Approx(100.0));
}

TEST_CASE("malformed rows carry their line number") {
    TempDir dir("dataio");
    const auto p = write_csv(dir, "B0004.csv", "cycle,capacity_ah\n1,2.0\nnope,1.9\n");
    try {
        load_capacity(p);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
    }
}

TEST_CASE("schema violations are rejected") {
    TempDir dir("dataio");
    SUBCASE("duplicate cycle") {
        const auto p = write_csv(dir, "a.csv", "cycle,capacity_ah\n1,2.0\n1,1.9\n");
        CHECK_THROWS_AS(load_capacity(p), SchemaError);
    }
    SUBCASE("gap in cycles") {
        const auto p = write_csv(dir, "b.csv", "cycle,capacity_ah\n1,2.0\n3,1.9\n");
        CHECK_THROWS_AS(load_capacity(p), SchemaError);
    }
    SUBCASE("not starting at one") {
        const auto p = write_csv(dir, "c.csv", "cycle,capacity_ah\n2,2.0\n3,1.9\n");
        CHECK_THROWS_AS(load_capacity(p), SchemaError);
    }
    SUBCASE("capacity out of range") {
        const auto p = write_csv(dir, "d.csv", "cycle,capacity_ah\n1,5.0\n");
        CHECK_THROWS_AS(load_capacity(p), SchemaError);
    }
    SUBCASE("wrong header") {
        const auto p = write_csv(dir, "e.csv", "time,cap\n1,2.0\n");
        CHECK_THROWS_AS(load_capacity(p), ParseError);
    }
}

TEST_CASE("export is a lossless round trip") {
    TempDir dir("dataio");
    const auto p = write_csv(dir, "B0005.csv",
                             "cycle,capacity_ah\n1,1.8564874580999999\n2,1.846327\n3,1.83\n");
    const DegradationSeries a = load_capacity(p);
    const auto p2 = dir.path() / "roundtrip.csv";
    save_capacity(p2, a);
    const DegradationSeries b = load_capacity(p2);
    // ids differ by filename; everything else must match exactly
    CHECK(a.cycles == b.cycles);
    CHECK(a.hi == b.hi);
    CHECK(a.capacity_ah == b.capacity_ah);
    CHECK(a.failure_cycle == b.failure_cycle);
    CHECK(a.eta == b.eta);
}

TEST_CASE("failure cycle is unset exactly when the series stays above eta") {
    TempDir dir("dataio");
    const auto above = write_csv(dir, "up.csv", "cycle,capacity_ah\n1,2.0\n2,1.95\n");
    CHECK_FALSE(load_capacity(above).failure_cycle.has_value());
    const auto below = write_csv(dir, "down.csv", "cycle,capacity_ah\n1,2.0\n2,1.39\n");
    CHECK(load_capacity(below).failure_cycle == 2);
}

TEST_CASE("missing file is an error") {
    CHECK_THROWS_AS(load_capacity("/nonexistent/never.csv"), Error);
}

TEST_CASE("rated capacity and threshold are configurable") {
    TempDir dir("dataio");
    const auto p = write_csv(dir, "alt.csv", "cycle,capacity_ah\n1,1.1\n2,0.9\n3,0.85\n");
    const DegradationSeries s = load_capacity(p, /*rated_ah=*/1.1, /*eta=*/80.0);
    CHECK(s.hi[0] == doctest::Approx(100.0));
    CHECK(s.hi[1] == doctest::Approx(100.0 * 0.9 / 1.1));
    CHECK(s.eta == 80.0);
    REQUIRE(s.failure_cycle.has_value());
    CHECK(*s.failure_cycle == 3); // 81.8% still above 80, 77.3% is not
}
