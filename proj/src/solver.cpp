#include "mdauct/solver.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "dual_lp.hpp"
#include "mdauct/separation.hpp"

namespace mdauct {

namespace {

struct RefHash {
    std::size_t operator()(const ConstraintRef& r) const { return constraint_hash(r); }
};
struct RefEq {
    bool operator()(const ConstraintRef& a, const ConstraintRef& b) const {
        return same_constraint(a, b);
    }
};
using RefSet = std::unordered_set<ConstraintRef, RefHash, RefEq>;

double constraint_slack(const ConstraintRef& ref, std::span<const double> x,
                        const AuctionSetting& setting, const VariableLayout& layout) {
    const TypeGrid& grid = *setting.grid;
    if (const auto* icc = std::get_if<IccRef>(&ref)) {
        double lhs = x[layout.u_var(icc->from)] - x[layout.u_var(icc->to)];
        for (int j = 0; j < layout.qualities(); ++j) {
            lhs -= (grid.coord(icc->from, j) - grid.coord(icc->to, j)) *
                   x[layout.q_var(icc->to, j)];
        }
        return lhs;  // >=-row: satisfied margin is lhs - 0
    }
    if (const auto* border = std::get_if<BorderRef>(&ref)) {
        double inside = 0.0;
        double lhs = 0.0;
        for (int v : border->members) {
            const double f = setting.density[v];
            inside += f;
            double s = 0.0;
            for (int j = 0; j < layout.qualities(); ++j) s += x[layout.q_var(v, j)];
            lhs += setting.buyers * f * s;
        }
        const double outside = std::clamp(1.0 - inside, 0.0, 1.0);
        return 1.0 - std::pow(outside, setting.buyers) - lhs;
    }
    return 0.0;
}

Row materialize(const ConstraintRef& ref, const AuctionSetting& setting,
                const VariableLayout& layout) {
    if (const auto* icc = std::get_if<IccRef>(&ref)) {
        return icc_row(layout, icc->from, icc->to, *setting.grid);
    }
    if (const auto* border = std::get_if<BorderRef>(&ref)) {
        return border_row(layout, border->members, setting, border->level);
    }
    throw std::logic_error("only incentive and Border cuts enter the pool");
}

}  // namespace

void SolverConfig::validate() const {
    if (violation_tol <= 0.0 || inactive_slack <= 0.0 || exclusion_tau <= 0.0) {
        throw std::invalid_argument("solver tolerances must be positive");
    }
    if (exclusion_tau <= lp.feas_tol) {
        throw std::invalid_argument("exclusion threshold must exceed the LP tolerance");
    }
    if (max_inner < 1 || max_outer < 1) {
        throw std::invalid_argument("iteration limits must be positive");
    }
}

std::vector<int> select_inactive(const std::vector<PoolEntry>& pool,
                                 std::span<const double> slack, long latest_update,
                                 double threshold) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(pool.size()); ++i) {
        if (pool[i].birth == latest_update) continue;  // just added; avoid churn
        if (slack[i] > threshold) out.push_back(i);
    }
    return out;
}

std::vector<bool> exclusion_region(const MechanismSolution& solution, double tau) {
    const int n = static_cast<int>(solution.u.size());
    std::vector<bool> mask(n);
    for (int v = 0; v < n; ++v) {
        double total = 0.0;
        for (double qj : solution.q_of(v)) total += qj;
        mask[v] = total <= tau;
    }
    return mask;
}

MechanismSolution solve_optimal_auction(const AuctionSetting& setting,
                                        const SolverConfig& config) {
    validate_setting(setting);
    config.validate();
    const TypeGrid& grid = *setting.grid;
    const int n = grid.size();
    if (n < 2) throw std::invalid_argument("grid needs at least two points");
    const int qualities = setting.qualities();
    const VariableLayout layout(n, qualities);

    const auto t0 = std::chrono::steady_clock::now();
    detail::DualLp lp(base_program(setting, layout), config.lp);

    PoolState pool;
    pool.incumbent = std::numeric_limits<double>::infinity();
    RefSet in_pool;
    RefSet in_accumulated;

    MechanismSolution result;
    result.buyers = setting.buyers;
    result.qualities = qualities;
    SolveDiagnostics& diag = result.diagnostics;

    std::vector<double> x;
    double opt_k = 0.0;
    bool inner_exhausted = false;

    auto solve_relaxation = [&]() {
        const SolveStatus status = lp.solve();
        if (status != SolveStatus::Optimal) {
            if (status == SolveStatus::IterationLimit) return false;
            throw std::runtime_error(std::string("LP backend failed: ") + to_string(status));
        }
        x = lp.values();
        opt_k = lp.objective();
        return true;
    };

    for (int outer = 1; outer <= config.max_outer; ++outer) {
        diag.outer_iterations = outer;
        bool fixpoint = false;
        for (int k = 1; k <= config.max_inner; ++k) {
            ++diag.inner_iterations;
            if (!solve_relaxation()) {
                inner_exhausted = true;
                break;
            }
            const std::span<const double> q(x.data(), static_cast<std::size_t>(n) * qualities);
            const std::span<const double> u(x.data() + static_cast<std::size_t>(n) * qualities,
                                            static_cast<std::size_t>(n));

            std::vector<Violation> violated = find_icc_violations(
                q, u, grid, RegionSpec{pool.region_level, IccScanMode::Local},
                config.violation_tol);
            {
                std::vector<Violation> border =
                    find_border_violations(q, setting, config.violation_tol);
                violated.insert(violated.end(), std::make_move_iterator(border.begin()),
                                std::make_move_iterator(border.end()));
            }

            // A^k: fresh violations plus any accumulated full-scan cut that
            // is not in the LP yet (re-injected after an outer failure).
            std::vector<ConstraintRef> to_add;
            RefSet batch;
            for (const Violation& v : violated) {
                if (!in_pool.count(v.ref) && batch.insert(v.ref).second) to_add.push_back(v.ref);
            }
            for (const ConstraintRef& ref : pool.accumulated) {
                if (!in_pool.count(ref) && batch.insert(ref).second) to_add.push_back(ref);
            }
            if (to_add.empty()) {
                fixpoint = true;
                break;
            }

            std::vector<double> slack(pool.active.size());
            for (std::size_t i = 0; i < pool.active.size(); ++i) {
                slack[i] = constraint_slack(pool.active[i].ref, x, setting, layout);
            }
            const std::vector<int> inactive =
                select_inactive(pool.active, slack, pool.updates, config.inactive_slack);

            if (config.trace) {
                *config.trace << "outer " << outer << " L=" << pool.region_level << " inner " << k
                              << ": opt=" << opt_k << " pool=" << pool.active.size()
                              << " new=" << to_add.size() << " inactive=" << inactive.size()
                              << " pivots=" << lp.iterations() << std::endl;
            }

            if (opt_k < pool.incumbent) {
                // Accepted bound improvement: drop inactive cuts (accumulated
                // ones would be re-added immediately, so they stay).
                std::vector<bool> drop(pool.active.size(), false);
                for (int i : inactive) {
                    const PoolEntry& entry = pool.active[i];
                    if (in_accumulated.count(entry.ref)) continue;
                    if (lp.remove_row(entry.column)) drop[i] = true;
                }
                std::vector<PoolEntry> kept;
                kept.reserve(pool.active.size());
                for (std::size_t i = 0; i < pool.active.size(); ++i) {
                    if (drop[i]) {
                        in_pool.erase(pool.active[i].ref);
                        ++diag.cuts_removed;
                    } else {
                        kept.push_back(std::move(pool.active[i]));
                    }
                }
                pool.active = std::move(kept);
                pool.incumbent = opt_k;
            }

            ++pool.updates;
            for (ConstraintRef& ref : to_add) {
                const int col = lp.add_row(materialize(ref, setting, layout));
                in_pool.insert(ref);
                pool.active.push_back({std::move(ref), col, pool.updates});
                ++diag.cuts_added;
            }
        }

        if (!fixpoint) {
            inner_exhausted = true;
            break;
        }

        const std::span<const double> q(x.data(), static_cast<std::size_t>(n) * qualities);
        const std::span<const double> u(x.data() + static_cast<std::size_t>(n) * qualities,
                                        static_cast<std::size_t>(n));
        const std::vector<Violation> full = find_icc_violations(
            q, u, grid, RegionSpec{pool.region_level, IccScanMode::Full}, config.violation_tol);
        if (config.trace) {
            *config.trace << "outer " << outer << " full scan: " << full.size() << " violations"
                          << std::endl;
        }
        if (full.empty()) {
            diag.certified = find_border_violations(q, setting, config.violation_tol).empty();
            break;
        }
        for (const Violation& v : full) {
            if (in_accumulated.insert(v.ref).second) pool.accumulated.push_back(v.ref);
        }
        ++pool.region_level;
    }

    diag.final_region_level = pool.region_level;
    diag.lp_pivots = lp.iterations();
    if (inner_exhausted) diag.certified = false;

    result.per_buyer_objective = opt_k;
    result.total_revenue = setting.buyers * opt_k;
    result.q.assign(x.begin(), x.begin() + static_cast<std::size_t>(n) * qualities);
    result.u.assign(x.begin() + static_cast<std::size_t>(n) * qualities, x.end());
    result.m.resize(n);
    for (int v = 0; v < n; ++v) {
        double paid = -result.u[v];
        for (int j = 0; j < qualities; ++j) paid += grid.coord(v, j) * result.q[v * qualities + j];
        result.m[v] = paid;
    }
    diag.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace mdauct
