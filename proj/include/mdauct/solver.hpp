#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "mdauct/lpmodel.hpp"
#include "mdauct/simplex.hpp"

namespace mdauct {

enum class LpOrientation : std::uint8_t { Auto, Primal, Dual };

/// Result of one LP solve: optimal values, maximize-form objective, and the
/// satisfied margin of every row (lhs-vs-rhs in the row's favorable
/// direction; signed residual for equalities).
struct LpSolution {
    SolveStatus status = SolveStatus::Optimal;
    std::vector<double> values;
    double objective = 0.0;
    std::vector<double> slack;
    long iterations = 0;
};

/// Solves a LinearProgram to optimality.  The orientation picks whether the
/// simplex runs on the program itself or on its dual (profitable when rows
/// far outnumber variables); both produce the same primal answer.
LpSolution lp_solve(const LinearProgram& lp, const SimplexOptions& opts = {},
                    LpOrientation orientation = LpOrientation::Auto);

struct SolverConfig {
    double violation_tol = 1e-7;   // separation oracles
    double inactive_slack = 1e-6;  // cut-removal threshold
    int max_inner = 200;
    int max_outer = 50;
    double exclusion_tau = 1e-6;
    SimplexOptions lp{};
    std::ostream* trace = nullptr;  // per-iteration progress lines

    void validate() const;
};

/// One constraint currently in the cut pool.
struct PoolEntry {
    ConstraintRef ref;
    int column = -1;   // engine column id
    long birth = 0;    // update serial that introduced it
};

/// Mutable state of the plane-cutting loop, exposed for inspection.
struct PoolState {
    std::vector<PoolEntry> active;        // S: cuts currently in the LP
    std::vector<ConstraintRef> accumulated;  // A: every full-scan violation seen
    double incumbent = 0.0;               // OPT-bar
    int region_level = 1;                 // L
    long updates = 0;                     // pool edit serial
};

struct SolveDiagnostics {
    int outer_iterations = 0;
    int inner_iterations = 0;
    long lp_pivots = 0;
    long cuts_added = 0;
    long cuts_removed = 0;
    int final_region_level = 1;
    double wall_seconds = 0.0;
    bool certified = false;
};

/// Interim mechanism produced by the solver: allocation probabilities,
/// utilities, payments, and the per-buyer objective value.
struct MechanismSolution {
    int buyers = 1;
    int qualities = 1;
    std::vector<double> q;  // grid-size x J, row-major
    std::vector<double> u;  // grid-size
    std::vector<double> m;  // grid-size, from M = sum_j v_j Q_j - U
    double per_buyer_objective = 0.0;
    double total_revenue = 0.0;
    SolveDiagnostics diagnostics;

    std::span<const double> q_of(int point) const {
        return {q.data() + static_cast<std::size_t>(point) * qualities,
                static_cast<std::size_t>(qualities)};
    }
};

/// Runs the iterative plane-cutting loop: repeatedly solve the LP on the
/// active cuts, add violated local incentive and Border constraints, drop
/// inactive ones when the bound improves, and grow the scanned region until
/// a full scan certifies the solution.
MechanismSolution solve_optimal_auction(const AuctionSetting& setting,
                                        const SolverConfig& config = {});

/// Indices (into a pool snapshot) of removable cuts: slack above the
/// threshold and not introduced by the latest pool update.
std::vector<int> select_inactive(const std::vector<PoolEntry>& pool,
                                 std::span<const double> slack, long latest_update,
                                 double threshold);

/// mask[v] = true iff the total interim probability at v is <= tau.
std::vector<bool> exclusion_region(const MechanismSolution& solution, double tau);

}  // namespace mdauct
