// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "irscb/grid.hpp"

using namespace irscb;

TEST_CASE("covered span follows the grating-lobe rule") {
    CHECK(beta_bar_for_spacing(0.5) == doctest::Approx(2.0));
    CHECK(beta_bar_for_spacing(0.2) == doctest::Approx(4.0));  // capped at the physical max
    CHECK(beta_bar_for_spacing(1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(beta_bar_for_spacing(0.0), std::invalid_argument);
}

TEST_CASE("grid construction and interval layout") {
    IrsGeometry g{4, 4, 0.5, 0.5};
    SUBCASE("13 intervals put the center interval at +-0.0769") {
        BetaGrid grid = build_grid(g, 13, 13, 5, 5);
        CHECK(grid.beta_bar_y == doctest::Approx(2.0));
        const BetaInterval center = grid.interval_y(6);
        CHECK(center.lo == doctest::Approx(-0.076923076923076927).epsilon(1e-12));
        CHECK(center.hi == doctest::Approx(0.076923076923076927).epsilon(1e-12));
    }
    SUBCASE("9 intervals give width 0.2222 and center +-0.111") {
        BetaGrid grid = build_grid(g, 9, 9, 5, 5);
        const BetaInterval center = grid.interval_y(4);
        CHECK(center.width() == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
        CHECK(center.lo == doctest::Approx(-1.0 / 9.0).epsilon(1e-12));
        CHECK(center.hi == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
    }
    SUBCASE("invalid counts are rejected") {
        CHECK_THROWS_AS(build_grid(g, 0, 1, 5, 5), std::invalid_argument);
        CHECK_THROWS_AS(build_grid(g, 1, 1, 0, 5), std::invalid_argument);
    }
}

TEST_CASE("intervals tile the covered range exactly") {
    IrsGeometry g{4, 4, 0.5, 0.4};
    for (int m : {1, 2, 5, 9, 13}) {
        BetaGrid grid = build_grid(g, m, m, 3, 3);
        CHECK(grid.interval_y(0).lo == -0.5 * grid.beta_bar_y);
        CHECK(grid.interval_y(m - 1).hi == 0.5 * grid.beta_bar_y);
        for (int i = 0; i + 1 < m; ++i) {
            // Shared endpoints, no gaps and no overlap beyond the endpoint.
            CHECK(grid.interval_y(i).hi == grid.interval_y(i + 1).lo);
        }
    }
}

TEST_CASE("sample points") {
    SUBCASE("uniform with endpoints") {
        const auto pts = sample_points({-0.1, 0.1}, 3);
        REQUIRE(pts.size() == 3);
        CHECK(pts[0] == -0.1);
        CHECK(pts[1] == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(pts[2] == 0.1);
    }
    SUBCASE("single point falls on the midpoint") {
        const auto pts = sample_points({-0.3, 0.1}, 1);
        REQUIRE(pts.size() == 1);
        CHECK(pts[0] == doctest::Approx(-0.1));
    }
    SUBCASE("arithmetic progression") {
        const auto pts = sample_points({0.2, 0.4}, 5);
        const double expect[] = {0.2, 0.25, 0.3, 0.35, 0.4};
        for (int i = 0; i < 5; ++i)
            CHECK(pts[static_cast<std::size_t>(i)] == doctest::Approx(expect[i]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(sample_points({0.0, 1.0}, 0), std::invalid_argument);
}

TEST_CASE("sample sets map back to their interval") {
    IrsGeometry g{4, 4, 0.5, 0.5};
    BetaGrid grid = build_grid(g, 7, 5, 4, 3);
    for (int my = 0; my < 7; ++my)
        for (int mz = 0; mz < 5; ++mz) {
            const SampleSet s = sample_interval(grid, my, mz);
            CHECK(s.pair_count() == 12);
            for (double by : s.points_y) {
                CHECK(grid.interval_y(my).contains(by));
                const int idx = grid.interval_index_y(by);
                // Interior points must map back; endpoints may resolve to the
                // neighbour that shares them.
                if (by != grid.interval_y(my).lo && by != grid.interval_y(my).hi)
                    CHECK(idx == my);
                else
                    CHECK((idx == my || idx == my - 1 || idx == my + 1));
            }
            for (double bz : s.points_z) CHECK(grid.interval_z(mz).contains(bz));
        }
    CHECK_THROWS_AS(sample_interval(grid, 7, 0), std::out_of_range);
    CHECK_THROWS_AS(grid.interval_index_y(1.5), std::out_of_range);
}
