#include <cmath>
#include <limits>
#include <stdexcept>

#include "dual_lp.hpp"
#include "mdauct/solver.hpp"

namespace mdauct {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_program(const LinearProgram& lp) {
    if (lp.num_vars < 1) throw std::invalid_argument("program needs at least one variable");
    if (static_cast<int>(lp.objective.size()) != lp.num_vars ||
        static_cast<int>(lp.lower.size()) != lp.num_vars ||
        static_cast<int>(lp.upper.size()) != lp.num_vars) {
        throw std::invalid_argument("objective/bounds size mismatch");
    }
    for (const Row& row : lp.rows) {
        for (const auto& [var, coef] : row.coeffs) {
            if (var < 0 || var >= lp.num_vars) {
                throw std::invalid_argument("row references unknown variable");
            }
            (void)coef;
        }
    }
}

std::vector<double> row_slacks(const LinearProgram& lp, const std::vector<double>& x) {
    std::vector<double> slack;
    slack.reserve(lp.rows.size());
    for (const Row& row : lp.rows) {
        double act = 0.0;
        for (const auto& [var, coef] : row.coeffs) act += coef * x[var];
        slack.push_back(row.sense == RowSense::GreaterEqual ? act - row.rhs : row.rhs - act);
    }
    return slack;
}

/// No rows: every variable sits at its favorable bound.
LpSolution solve_bounds_only(const LinearProgram& lp) {
    LpSolution sol;
    sol.values.resize(lp.num_vars);
    for (int j = 0; j < lp.num_vars; ++j) {
        const double c = lp.objective[j];
        double v;
        if (c > 0.0) {
            v = lp.upper[j];
        } else if (c < 0.0) {
            v = lp.lower[j];
        } else {
            v = std::isfinite(lp.lower[j]) ? lp.lower[j]
                                           : (std::isfinite(lp.upper[j]) ? lp.upper[j] : 0.0);
        }
        if (!std::isfinite(v)) {
            sol.status = SolveStatus::Unbounded;
            return sol;
        }
        sol.values[j] = v;
        sol.objective += c * v;
    }
    sol.status = SolveStatus::Optimal;
    return sol;
}

LpSolution solve_primal_orientation(const LinearProgram& lp, const SimplexOptions& opts) {
    const int m = static_cast<int>(lp.rows.size());
    std::vector<double> rhs;
    rhs.reserve(m);
    for (const Row& row : lp.rows) rhs.push_back(row.rhs);
    SimplexCore core(m, std::move(rhs), opts);

    // Structural columns (engine minimizes, so negate the objective).
    std::vector<std::vector<std::pair<int, double>>> col_entries(lp.num_vars);
    for (int r = 0; r < m; ++r) {
        for (const auto& [var, coef] : lp.rows[r].coeffs) {
            col_entries[var].emplace_back(r, coef);
        }
    }
    std::vector<int> ids(lp.num_vars);
    for (int j = 0; j < lp.num_vars; ++j) {
        ids[j] = core.add_column(-lp.objective[j], std::move(col_entries[j]), lp.lower[j],
                                 lp.upper[j]);
    }
    // Slack column per row encodes the sense.
    for (int r = 0; r < m; ++r) {
        switch (lp.rows[r].sense) {
            case RowSense::LessEqual: core.add_column(0.0, {{r, 1.0}}, 0.0, kInf); break;
            case RowSense::GreaterEqual: core.add_column(0.0, {{r, 1.0}}, -kInf, 0.0); break;
            case RowSense::Equal: core.add_column(0.0, {{r, 1.0}}, 0.0, 0.0); break;
        }
    }

    LpSolution sol;
    sol.status = core.solve();
    sol.iterations = core.iterations();
    if (sol.status != SolveStatus::Optimal) return sol;
    sol.values.resize(lp.num_vars);
    for (int j = 0; j < lp.num_vars; ++j) {
        sol.values[j] = core.column_value(ids[j]);
        sol.objective += lp.objective[j] * sol.values[j];
    }
    sol.slack = row_slacks(lp, sol.values);
    return sol;
}

LpSolution solve_dual_orientation(const LinearProgram& lp, const SimplexOptions& opts) {
    LinearProgram base = lp;
    base.rows.clear();
    detail::DualLp dual(base, opts);
    for (const Row& row : lp.rows) dual.add_row(row);

    LpSolution sol;
    sol.status = dual.solve();
    sol.iterations = dual.iterations();
    if (sol.status != SolveStatus::Optimal) return sol;
    sol.values = dual.values();
    sol.objective = dual.objective();
    sol.slack = row_slacks(lp, sol.values);
    return sol;
}

}  // namespace

LpSolution lp_solve(const LinearProgram& lp, const SimplexOptions& opts,
                    LpOrientation orientation) {
    validate_program(lp);
    if (lp.rows.empty()) return solve_bounds_only(lp);

    bool use_dual;
    switch (orientation) {
        case LpOrientation::Primal: use_dual = false; break;
        case LpOrientation::Dual: use_dual = true; break;
        default:
            use_dual = static_cast<int>(lp.rows.size()) > 2 * lp.num_vars + 16;
            break;
    }
    return use_dual ? solve_dual_orientation(lp, opts) : solve_primal_orientation(lp, opts);
}

}  // namespace mdauct
