#include "dual_lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mdauct::detail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic objective jitter.  The auction relaxations have huge
/// symmetric optimal faces; without this the cut loop walks from one
/// alternate optimum to the next and the bound never moves.  The jitter is
/// far below every reported tolerance and only enters the engine's costs;
/// objectives are always reported against the clean coefficients.
std::vector<double> perturbed(const std::vector<double>& objective) {
    std::vector<double> out(objective);
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double h =
            0.5 + static_cast<double>(splitmix64(j) >> 11) * (1.0 / 9007199254740992.0);
        out[j] += 1e-8 * (1.0 + std::abs(out[j])) * h;
    }
    return out;
}

}  // namespace

DualLp::DualLp(const LinearProgram& base, const SimplexOptions& opts)
    : core_(base.num_vars, perturbed(base.objective), opts),
      primal_objective_(base.objective) {
    // Bound multipliers: one column per finite bound.  Their reduced-cost
    // conditions are exactly lo <= x <= up on the recovered primal point.
    for (int j = 0; j < base.num_vars; ++j) {
        if (std::isfinite(base.upper[j])) {
            core_.add_column(base.upper[j], {{j, 1.0}}, 0.0, kInf);
        }
        if (std::isfinite(base.lower[j])) {
            core_.add_column(-base.lower[j], {{j, -1.0}}, 0.0, kInf);
        }
    }
    for (const Row& row : base.rows) add_row(row);
}

int DualLp::add_row(const Row& row) {
    double cost = row.rhs;
    std::vector<std::pair<int, double>> entries = row.coeffs;
    double lo = 0.0;
    double up = kInf;
    switch (row.sense) {
        case RowSense::LessEqual:
            break;
        case RowSense::GreaterEqual:
            cost = -cost;
            for (auto& [var, coef] : entries) coef = -coef;
            break;
        case RowSense::Equal:
            lo = -kInf;
            break;
    }
    // Normalize to unit max coefficient: Border rows otherwise enter with
    // density-sized entries and get mispriced against the incentive rows.
    double scale = 0.0;
    for (const auto& [var, coef] : entries) scale = std::max(scale, std::abs(coef));
    if (scale > 0.0 && (scale < 0.5 || scale > 2.0)) {
        const double inv = 1.0 / scale;
        cost *= inv;
        for (auto& [var, coef] : entries) coef *= inv;
    }
    return core_.add_column(cost, std::move(entries), lo, up);
}

SolveStatus DualLp::solve() {
    const SolveStatus dual = core_.solve();
    SolveStatus primal;
    switch (dual) {
        case SolveStatus::Optimal: primal = SolveStatus::Optimal; break;
        case SolveStatus::Unbounded: primal = SolveStatus::Infeasible; break;
        case SolveStatus::Infeasible: primal = SolveStatus::Unbounded; break;
        default: primal = SolveStatus::IterationLimit; break;
    }
    if (primal == SolveStatus::Optimal) {
        x_ = core_.row_duals();
        objective_ = 0.0;
        for (std::size_t j = 0; j < x_.size(); ++j) objective_ += primal_objective_[j] * x_[j];
    }
    return primal;
}

}  // namespace mdauct::detail
