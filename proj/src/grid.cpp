#include "mdauct/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mdauct {

void validate_box(const Box& box) {
    if (box.lower.empty() || box.lower.size() != box.upper.size()) {
        throw std::invalid_argument("box must have matching, nonempty bounds");
    }
    for (std::size_t j = 0; j < box.lower.size(); ++j) {
        if (!(box.upper[j] > box.lower[j])) {
            throw std::invalid_argument("box dimension " + std::to_string(j) +
                                        " is degenerate (upper <= lower)");
        }
    }
}

TypeGrid::TypeGrid(Box box, int intervals)
    : box_(std::move(box)), intervals_(intervals) {
    validate_box(box_);
    if (intervals_ < 1) {
        throw std::invalid_argument("T must be >= 1");
    }
    const int dim = box_.dim();

    epsilon_ = std::numeric_limits<double>::infinity();
    for (int j = 0; j < dim; ++j) {
        epsilon_ = std::min(epsilon_, box_.range(j) / intervals_);
    }

    // floor() with a relative guard so that an exact multiple of the step
    // does not lose its last point to roundoff.
    counts_.resize(dim);
    size_ = 1;
    for (int j = 0; j < dim; ++j) {
        const double steps = box_.range(j) / epsilon_;
        counts_[j] = static_cast<int>(std::floor(steps * (1.0 + 1e-12) + 1e-9)) + 1;
        size_ *= static_cast<std::size_t>(counts_[j]);
    }

    strides_.resize(dim);
    strides_[dim - 1] = 1;
    for (int j = dim - 2; j >= 0; --j) {
        strides_[j] = strides_[j + 1] * counts_[j + 1];
    }

    points_.resize(size_ * static_cast<std::size_t>(dim));
    std::vector<int> multi(dim, 0);
    for (std::size_t idx = 0; idx < size_; ++idx) {
        for (int j = 0; j < dim; ++j) {
            points_[idx * dim + j] = box_.lower[j] + multi[j] * epsilon_;
        }
        for (int j = dim - 1; j >= 0; --j) {
            if (++multi[j] < counts_[j]) break;
            multi[j] = 0;
        }
    }
}

std::vector<int> TypeGrid::multi_index(int idx) const {
    const int dim = box_.dim();
    std::vector<int> multi(dim);
    for (int j = 0; j < dim; ++j) {
        multi[j] = idx / strides_[j];
        idx -= multi[j] * strides_[j];
    }
    return multi;
}

int TypeGrid::flat_index(std::span<const int> multi) const {
    int idx = 0;
    for (int j = 0; j < box_.dim(); ++j) {
        idx += multi[j] * strides_[j];
    }
    return idx;
}

int TypeGrid::index_of(std::span<const double> v) const {
    if (static_cast<int>(v.size()) != box_.dim()) {
        throw std::out_of_range("point has wrong dimension");
    }
    int idx = 0;
    for (int j = 0; j < box_.dim(); ++j) {
        const double steps = (v[j] - box_.lower[j]) / epsilon_;
        const int k = static_cast<int>(std::lround(steps));
        if (k < 0 || k >= counts_[j] || std::abs(steps - k) > 1e-9 * (std::abs(steps) + 1.0)) {
            throw std::out_of_range("point is not on the grid");
        }
        idx += k * strides_[j];
    }
    // Return the stored coordinates' index; point(idx) reproduces the stored
    // doubles exactly even when the caller's v carries rounding noise.
    return idx;
}

}  // namespace mdauct
