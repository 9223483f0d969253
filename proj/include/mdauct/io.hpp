#pragma once

#include <span>
#include <string>
#include <vector>

#include "mdauct/lpmodel.hpp"
#include "mdauct/solver.hpp"

namespace mdauct {

/// %.12g-style formatting used across the CSV artifacts.
std::string format_value(double v, int significant = 12);

/// solution.csv: `v_1..v_J,Q_1..Q_J,U,M,excluded`, one row per grid point in
/// index order, 12 significant digits.
std::string solution_csv(const AuctionSetting& setting, const MechanismSolution& solution,
                         const std::vector<bool>& mask);

/// PGM "P2" heatmap of one value per grid point, clamped to [0, 1]:
/// width = points along dimension 1, height = points along dimension 2,
/// top row = highest v_2, pixel = round(255 * value), half up.  Only
/// two-dimensional grids can be rendered.
std::string heatmap_pgm(const TypeGrid& grid, std::span<const double> values);

void write_file(const std::string& path, const std::string& content);

}  // namespace mdauct
