#include "doctest.h"

#include "sweep/error.hpp"
#include "sweep/time_grid.hpp"

using sweep::TimeGrid;

TEST_CASE("uniform grid hits both endpoints exactly") {
    const TimeGrid g = TimeGrid::uniform(0.0, 2.0, 3);
    CHECK(g.size() == 4);
    CHECK(g.intervals() == 3);
    CHECK(g.t_first() == 0.0);
    CHECK(g.t_last() == 2.0);
    CHECK(g.mesh() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("constructor rejects short or unsorted node lists") {
    CHECK_THROWS_AS(TimeGrid({0.0}), sweep::Error);
    CHECK_THROWS_AS(TimeGrid({0.0, 1.0, 1.0}), sweep::Error);
    CHECK_THROWS_AS(TimeGrid({1.0, 0.5}), sweep::Error);
    CHECK_THROWS_AS(TimeGrid::uniform(0.0, 1.0, 0), sweep::Error);
}

TEST_CASE("interval_of is right-continuous and closes at the last node") {
    const TimeGrid g({0.0, 0.5, 1.0});
    CHECK(g.interval_of(0.0) == 1);
    CHECK(g.interval_of(0.4999) == 1);
    CHECK(g.interval_of(0.5) == 2);
    CHECK(g.interval_of(1.0) == 2);
    try {
        (void)g.interval_of(1.5);
        FAIL("expected OutOfRange");
    } catch (const sweep::Error& e) {
        CHECK(e.kind() == sweep::ErrorKind::OutOfRange);
    }
}

TEST_CASE("anticipate maps to the next node") {
    const TimeGrid g({0.0, 0.5, 1.0});
    CHECK(sweep::anticipate(g, 0.0) == 0.0);
    CHECK(sweep::anticipate(g, 0.2) == 0.5);
    CHECK(sweep::anticipate(g, 0.5) == 0.5);
    CHECK(sweep::anticipate(g, 0.75) == 1.0);
    CHECK_THROWS_AS(sweep::anticipate(g, -0.1), sweep::Error);
}

TEST_CASE("integer-ratio refinements share nodes bitwise") {
    for (std::size_t base : {1u, 3u, 7u}) {
        for (std::size_t f : {2u, 3u, 5u}) {
            const TimeGrid coarse = TimeGrid::uniform(0.0, 2.0, base * 16);
            const TimeGrid fine = TimeGrid::uniform(0.0, 2.0, base * 16 * f);
            CHECK(coarse.nested_in(fine));
            CHECK_FALSE(fine.nested_in(coarse));
        }
    }
    CHECK_FALSE(TimeGrid::uniform(0.0, 1.0, 3).nested_in(TimeGrid::uniform(0.0, 1.0, 4)));
}
