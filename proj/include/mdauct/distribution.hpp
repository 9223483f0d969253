#pragma once

#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "mdauct/grid.hpp"

namespace mdauct {

class DistributionSpec;
using SpecPtr = std::shared_ptr<const DistributionSpec>;

/// Constant density over the box.
struct UniformSpec {};

/// Beta(a, b) applied per dimension to the coordinate rescaled onto [0, 1].
struct BetaSpec {
    double a = 1.0;
    double b = 1.0;
};

/// Independent normal per dimension, evaluated without truncation; grid
/// normalization supplies the truncation to the box.
struct TruncNormalSpec {
    std::vector<double> mean;
    std::vector<double> stddev;
};

/// One 1-D spec per dimension, multiplied together.
struct ProductSpec {
    std::vector<SpecPtr> dims;
};

/// alpha * first + (1 - alpha) * second, evaluated pointwise.
struct MixtureSpec {
    double alpha = 0.5;
    SpecPtr first;
    SpecPtr second;
};

/// Explicit nonnegative value per grid point; only meaningful for the grid
/// it was written for.
struct TableSpec {
    std::vector<double> values;
};

/// Tagged union of the supported distribution families.  Immutable; children
/// are shared so specs are cheap to copy and safe to share across threads.
class DistributionSpec {
public:
    using Node =
        std::variant<UniformSpec, BetaSpec, TruncNormalSpec, ProductSpec, MixtureSpec, TableSpec>;

    explicit DistributionSpec(Node node);

    static DistributionSpec uniform();
    static DistributionSpec beta(double a, double b);
    static DistributionSpec trunc_normal(std::vector<double> mean, std::vector<double> stddev);
    static DistributionSpec product(std::vector<DistributionSpec> dims);
    static DistributionSpec mixture(double alpha, DistributionSpec first, DistributionSpec second);
    static DistributionSpec table(std::vector<double> values);

    const Node& node() const { return node_; }
    bool is_table() const { return std::holds_alternative<TableSpec>(node_); }

private:
    Node node_;
};

/// Unnormalized continuous density of `spec` at `point` inside `box`.
/// Beta coordinates are rescaled to [0, 1] before evaluation; TruncNormal
/// uses the plain normal pdf.  Rejects out-of-box points and Table specs
/// (tables are resolved against a grid in discretize_density).
double eval_density(const DistributionSpec& spec, std::span<const double> point, const Box& box);

/// Probability mass over the points of a TypeGrid.
struct DiscreteDensity {
    std::shared_ptr<const TypeGrid> grid;
    std::vector<double> mass;

    double operator[](int idx) const { return mass[idx]; }
};

/// mass[v] = eval(v) / sum over grid points; rejects specs that evaluate to
/// zero everywhere or to a non-finite value at any grid point.
DiscreteDensity discretize_density(const DistributionSpec& spec,
                                   std::shared_ptr<const TypeGrid> grid);

}  // namespace mdauct
