#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mdauct {

/// Axis-aligned box of valuations, one [lower, upper] interval per quality
/// grade.
struct Box {
    std::vector<double> lower;
    std::vector<double> upper;

    int dim() const { return static_cast<int>(lower.size()); }
    double range(int j) const { return upper[j] - lower[j]; }
};

/// Throws std::invalid_argument unless every interval is non-degenerate.
void validate_box(const Box& box);

/// Uniform discretization of a Box.  The step is the minimum of
/// (upper[j]-lower[j])/T over dimensions; each dimension carries as many
/// steps of that size as fit in its range.  Points are enumerated in
/// row-major order of per-dimension indices (last dimension fastest).
class TypeGrid {
public:
    TypeGrid(Box box, int intervals);

    const Box& box() const { return box_; }
    int dim() const { return box_.dim(); }
    int intervals() const { return intervals_; }
    double epsilon() const { return epsilon_; }

    int size() const { return static_cast<int>(size_); }
    int points_per_dim(int j) const { return counts_[j]; }

    /// Coordinates of grid point `idx`, laid out contiguously.
    std::span<const double> point(int idx) const {
        return {points_.data() + static_cast<std::size_t>(idx) * box_.lower.size(),
                box_.lower.size()};
    }
    double coord(int idx, int j) const {
        return points_[static_cast<std::size_t>(idx) * box_.lower.size() + j];
    }

    /// Per-dimension integer indices of grid point `idx`.
    std::vector<int> multi_index(int idx) const;

    /// Flat index from per-dimension indices (row-major, no bounds check).
    int flat_index(std::span<const int> multi) const;

    /// Index of the grid point equal to `v` (coordinates are snapped to the
    /// nearest step).  Throws std::out_of_range if `v` is not a grid point.
    int index_of(std::span<const double> v) const;

    /// Index of the grid's lower corner (always 0 by construction).
    int lower_corner() const { return 0; }

private:
    Box box_;
    int intervals_;
    double epsilon_;
    std::vector<int> counts_;
    std::vector<int> strides_;
    std::size_t size_;
    std::vector<double> points_;
};

}  // namespace mdauct
