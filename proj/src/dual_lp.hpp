#pragma once

#include <vector>

#include "mdauct/lpmodel.hpp"
#include "mdauct/simplex.hpp"

namespace mdauct::detail {

/// Incremental maximization LP over a fixed variable set, solved through its
/// dual.  Primal rows map to dual columns, so the cut loop's row edits are
/// column edits here and the working basis survives them.
class DualLp {
public:
    DualLp(const LinearProgram& base, const SimplexOptions& opts);

    /// Installs a primal row; returns the engine column id standing for it.
    int add_row(const Row& row);

    /// Drops a primal row by its column id; false when the basis still
    /// depends on it (retry after the next solve).
    bool remove_row(int column_id) { return core_.remove_column(column_id); }

    /// Re-optimizes from the current basis and refreshes the cached primal
    /// point.  Statuses are reported in primal terms.
    SolveStatus solve();

    double objective() const { return objective_; }
    const std::vector<double>& values() const { return x_; }
    long iterations() const { return core_.iterations(); }

private:
    SimplexCore core_;
    std::vector<double> primal_objective_;
    std::vector<double> x_;
    double objective_ = 0.0;
};

}  // namespace mdauct::detail
