#include <doctest.h>

#include <memory>
#include <sstream>

#include "mdauct/experiment.hpp"
#include "mdauct/io.hpp"

using namespace mdauct;

namespace {

AuctionSetting tiny_setting() {
    auto grid = std::make_shared<const TypeGrid>(Box{{0.0, 0.0}, {1.0, 1.0}}, 1);
    AuctionSetting setting;
    setting.buyers = 1;
    setting.costs = {0.0, 0.0};
    setting.density = discretize_density(DistributionSpec::uniform(), grid);
    setting.grid = std::move(grid);
    return setting;
}

}  // namespace

TEST_CASE("heatmap extremes and rounding") {
    const TypeGrid grid(Box{{0.0, 0.0}, {1.0, 1.0}}, 1);
    const std::vector<double> ones(4, 1.0);
    CHECK(heatmap_pgm(grid, ones) == "P2\n2 2\n255\n255 255\n255 255\n");
    const std::vector<double> zeros(4, 0.0);
    CHECK(heatmap_pgm(grid, zeros) == "P2\n2 2\n255\n0 0\n0 0\n");
    const std::vector<double> halves(4, 0.5);
    CHECK(heatmap_pgm(grid, halves) == "P2\n2 2\n255\n128 128\n128 128\n");
}

TEST_CASE("heatmap orientation puts the highest second coordinate on top") {
    const TypeGrid grid(Box{{0.0, 0.0}, {1.0, 1.0}}, 1);
    // value = v2: the top row must be bright.
    std::vector<double> values(grid.size());
    for (int v = 0; v < grid.size(); ++v) values[v] = grid.coord(v, 1);
    CHECK(heatmap_pgm(grid, values) == "P2\n2 2\n255\n255 255\n0 0\n");
    // values are clamped into [0, 1]; index = i1 * n2 + i2
    const std::vector<double> loud{-1.0, 2.0, -1.0, 2.0};
    CHECK(heatmap_pgm(grid, loud) == "P2\n2 2\n255\n255 255\n0 0\n");
}

TEST_CASE("heatmaps require two dimensions") {
    const TypeGrid grid(Box{{0.0}, {1.0}}, 2);
    const std::vector<double> values(3, 0.0);
    CHECK_THROWS_AS(heatmap_pgm(grid, values), std::invalid_argument);
}

TEST_CASE("solution csv has the fixed header and one row per point") {
    const AuctionSetting setting = tiny_setting();
    MechanismSolution solution;
    solution.buyers = 1;
    solution.qualities = 2;
    solution.q = {0.0, 0.0, 0.25, 0.0, 0.0, 0.5, 1.0, 1.0};
    solution.u = {0.0, 0.125, 0.25, 1.0};
    solution.m = {0.0, 0.1, 0.2, 0.3};
    const std::vector<bool> mask{true, false, false, false};
    const std::string csv = solution_csv(setting, solution, mask);

    std::istringstream lines(csv);
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "v_1,v_2,Q_1,Q_2,U,M,excluded");
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == setting.grid->size());
    CHECK(csv.find("0,0,0,0,0,0,1") != std::string::npos);
}

TEST_CASE("twelve significant digits by default") {
    CHECK(format_value(1.0 / 3.0) == "0.333333333333");
    CHECK(format_value(0.25) == "0.25");
    CHECK(format_value(1234567.0) == "1234567");
}

TEST_CASE("mask comparison: exact and within one cell") {
    const TypeGrid grid(Box{{0.0, 0.0}, {1.0, 1.0}}, 4);
    std::vector<bool> a(grid.size(), false), b(grid.size(), false);
    // A small lower-left blob, then the same blob shifted by one cell.
    for (int v = 0; v < grid.size(); ++v) {
        const auto multi = grid.multi_index(v);
        if (multi[0] + multi[1] <= 2) a[v] = true;
        if (multi[0] + multi[1] <= 3) b[v] = true;
    }
    CHECK(masks_equal(a, a));
    CHECK(!masks_equal(a, b));
    CHECK(masks_equal_fuzzy(a, b, grid));

    // Two cells apart is no longer fuzzy-equal.
    std::vector<bool> c(grid.size(), false);
    for (int v = 0; v < grid.size(); ++v) {
        const auto multi = grid.multi_index(v);
        if (multi[0] + multi[1] <= 4) c[v] = true;
    }
    CHECK(!masks_equal_fuzzy(a, c, grid));
}
