#include "mdauct/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mdauct {

std::string format_value(double v, int significant) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant, v);
    return buf;
}

std::string solution_csv(const AuctionSetting& setting, const MechanismSolution& solution,
                         const std::vector<bool>& mask) {
    const TypeGrid& grid = *setting.grid;
    const int n = grid.size();
    const int qualities = setting.qualities();

    std::string out;
    for (int j = 1; j <= qualities; ++j) out += "v_" + std::to_string(j) + ",";
    for (int j = 1; j <= qualities; ++j) out += "Q_" + std::to_string(j) + ",";
    out += "U,M,excluded\n";

    for (int v = 0; v < n; ++v) {
        for (int j = 0; j < qualities; ++j) out += format_value(grid.coord(v, j)) + ",";
        for (int j = 0; j < qualities; ++j) {
            out += format_value(solution.q[static_cast<std::size_t>(v) * qualities + j]) + ",";
        }
        out += format_value(solution.u[v]) + "," + format_value(solution.m[v]) + ",";
        out += mask[v] ? "1" : "0";
        out += "\n";
    }
    return out;
}

std::string heatmap_pgm(const TypeGrid& grid, std::span<const double> values) {
    if (grid.dim() != 2) {
        throw std::invalid_argument("heatmaps need a two-dimensional grid (CSV covers the rest)");
    }
    if (static_cast<int>(values.size()) != grid.size()) {
        throw std::invalid_argument("heatmap needs one value per grid point");
    }
    const int width = grid.points_per_dim(0);
    const int height = grid.points_per_dim(1);

    std::string out = "P2\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    for (int row = 0; row < height; ++row) {
        const int i2 = height - 1 - row;  // top row carries the highest v_2
        for (int i1 = 0; i1 < width; ++i1) {
            const double v = std::clamp(values[i1 * height + i2], 0.0, 1.0);
            const int pixel = static_cast<int>(std::floor(255.0 * v + 0.5));
            if (i1) out += ' ';
            out += std::to_string(pixel);
        }
        out += '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace mdauct
