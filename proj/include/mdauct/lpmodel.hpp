#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "mdauct/distribution.hpp"
#include "mdauct/grid.hpp"

namespace mdauct {

/// One experiment instance: N symmetric buyers, J quality grades with
/// constant unit costs, over a discretized type space.
struct AuctionSetting {
    int buyers = 1;
    std::vector<double> costs;  // one per quality grade
    std::shared_ptr<const TypeGrid> grid;
    DiscreteDensity density;

    int qualities() const { return static_cast<int>(costs.size()); }
};

/// Throws std::invalid_argument if the pieces are inconsistent.
void validate_setting(const AuctionSetting& setting);

/// Deterministic mapping from (grid point, quality) allocation variables and
/// per-point utility variables onto contiguous ids.
class VariableLayout {
public:
    VariableLayout(int grid_size, int qualities)
        : n_(grid_size), j_(qualities) {}

    int q_var(int point, int quality) const { return point * j_ + quality; }
    int u_var(int point) const { return n_ * j_ + point; }
    int count() const { return n_ * (j_ + 1); }

    int grid_size() const { return n_; }
    int qualities() const { return j_; }

private:
    int n_;
    int j_;
};

/// Identity of one incentive-compatibility pair: reporting type `to` must
/// not benefit a buyer of type `from`.
struct IccRef {
    int from = 0;
    int to = 0;

    bool operator==(const IccRef&) const = default;
};

/// Identity of one Border level set, stored as its member points sorted by
/// grid index.  `level` is the prefix rank in the sort that produced it.
struct BorderRef {
    int level = 0;
    std::vector<int> members;

    bool operator==(const BorderRef& o) const { return members == o.members; }
};

/// The utility normalization at the grid's lower corner.
struct LowerCornerRef {
    bool operator==(const LowerCornerRef&) const = default;
};

/// A Q_j(v) >= 0 bound, kept for diagnostics (bounds are not rows).
struct NonNegRef {
    int point = 0;
    int quality = 0;

    bool operator==(const NonNegRef&) const = default;
};

using ConstraintRef = std::variant<IccRef, BorderRef, LowerCornerRef, NonNegRef>;

bool same_constraint(const ConstraintRef& a, const ConstraintRef& b);
std::size_t constraint_hash(const ConstraintRef& ref);
std::string describe(const ConstraintRef& ref);

enum class RowSense : std::uint8_t { LessEqual, GreaterEqual, Equal };

/// Sparse constraint row: sum of coef*var (sense) rhs.
struct Row {
    std::vector<std::pair<int, double>> coeffs;
    RowSense sense = RowSense::LessEqual;
    double rhs = 0.0;
    ConstraintRef ref = LowerCornerRef{};
};

/// A maximization LP over the layout's variables: bounds plus sparse rows.
struct LinearProgram {
    int num_vars = 0;
    std::vector<double> objective;  // maximize
    std::vector<double> lower;      // -inf allowed
    std::vector<double> upper;      // +inf allowed
    std::vector<Row> rows;
};

/// Objective of the per-buyer relaxed problem: f(v) * (v_j - c_j) on each
/// Q_j(v) and -f(v) on each U(v).
std::vector<double> build_objective(const AuctionSetting& setting, const VariableLayout& layout);

/// U(v) - U(vhat) - sum_j (v_j - vhat_j) Q_j(vhat) >= 0.
Row icc_row(const VariableLayout& layout, int v, int vhat, const TypeGrid& grid);

/// N * sum_{v in A} f(v) * sum_j Q_j(v) <= 1 - (mass outside A)^N.
/// Zero-mass members contribute no coefficients.
Row border_row(const VariableLayout& layout, std::vector<int> members,
               const AuctionSetting& setting, int level = 0);

/// The always-present part of the LP: variable bounds (Q in [0,1], U >= 0,
/// both implied by the feasibility and rationality constraints) and the
/// single U(lower corner) = 0 equality row.
LinearProgram base_program(const AuctionSetting& setting, const VariableLayout& layout);

}  // namespace mdauct
