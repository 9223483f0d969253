#include <doctest.h>

#include <stdexcept>

#include "mdauct/grid.hpp"

using namespace mdauct;

TEST_CASE("grid matches the paper-scale discretizations") {
    const TypeGrid grid(Box{{2.0, 2.0}, {3.0, 3.0}}, 20);
    CHECK(grid.epsilon() == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(grid.points_per_dim(0) == 21);
    CHECK(grid.points_per_dim(1) == 21);
    CHECK(grid.size() == 441);

    const TypeGrid asym(Box{{6.0, 9.0}, {8.0, 11.0}}, 20);
    CHECK(asym.epsilon() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(asym.size() == 441);
}

TEST_CASE("minimal grid") {
    const TypeGrid grid(Box{{0.0}, {1.0}}, 1);
    CHECK(grid.epsilon() == 1.0);
    CHECK(grid.size() == 2);
    CHECK(grid.coord(0, 0) == 0.0);
    CHECK(grid.coord(1, 0) == 1.0);
}

TEST_CASE("uneven ranges carry more points at the common step") {
    const TypeGrid grid(Box{{0.0, 0.0}, {1.0, 2.0}}, 10);
    CHECK(grid.epsilon() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(grid.points_per_dim(0) == 11);
    CHECK(grid.points_per_dim(1) == 21);
    CHECK(grid.size() == 231);
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(TypeGrid(Box{{0.0}, {1.0}}, 0), std::invalid_argument);
    CHECK_THROWS_AS(TypeGrid(Box{{1.0}, {1.0}}, 5), std::invalid_argument);
    CHECK_THROWS_AS(TypeGrid(Box{{2.0, 0.0}, {1.0, 1.0}}, 5), std::invalid_argument);
    CHECK_THROWS_AS(validate_box(Box{{}, {}}), std::invalid_argument);
}

TEST_CASE("index round-trip over every point") {
    for (const auto& [box, t] : {std::pair{Box{{2.0, 2.0}, {3.0, 3.0}}, 7},
                                 std::pair{Box{{0.0, 0.0}, {1.0, 2.0}}, 5},
                                 std::pair{Box{{-1.0}, {1.0}}, 9}}) {
        const TypeGrid grid(box, t);
        for (int i = 0; i < grid.size(); ++i) {
            CHECK(grid.index_of(grid.point(i)) == i);
            const auto multi = grid.multi_index(i);
            CHECK(grid.flat_index(multi) == i);
        }
    }
}

TEST_CASE("row-major enumeration: last dimension fastest") {
    const TypeGrid grid(Box{{0.0, 0.0}, {1.0, 1.0}}, 2);
    CHECK(grid.coord(0, 0) == 0.0);
    CHECK(grid.coord(0, 1) == 0.0);
    CHECK(grid.coord(1, 1) == doctest::Approx(0.5));
    CHECK(grid.coord(1, 0) == 0.0);
    CHECK(grid.coord(3, 0) == doctest::Approx(0.5));
    CHECK(grid.coord(3, 1) == 0.0);
    CHECK(grid.lower_corner() == 0);
}

TEST_CASE("off-grid points are rejected") {
    const TypeGrid grid(Box{{0.0}, {1.0}}, 4);
    const double x = 0.3;
    CHECK_THROWS_AS(grid.index_of(std::span<const double>(&x, 1)), std::out_of_range);
    const double y = 1.5;
    CHECK_THROWS_AS(grid.index_of(std::span<const double>(&y, 1)), std::out_of_range);
}
