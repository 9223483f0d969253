#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace mdauct {

enum class SolveStatus : std::uint8_t { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(SolveStatus status);

struct SimplexOptions {
    double feas_tol = 1e-9;
    double opt_tol = 1e-10;
    double pivot_tol = 1e-9;
    long max_iterations = 0;  // 0: derived from problem size
    int refactor_interval = 160;
};

/// Bounded-variable revised simplex over a fixed set of equality rows
///   min  c'x   s.t.  M x = b,  lo <= x <= up
/// with a dynamic column pool.  Inequality rows are expressed by the caller
/// as explicit slack columns.  Columns may be added after a solve without
/// invalidating the basis (they enter nonbasic), which is what the cut loop
/// relies on for warm starts.
class SimplexCore {
public:
    SimplexCore(int rows, std::vector<double> rhs, SimplexOptions opts = {});

    /// Adds a column; entries are (row, coefficient) with distinct rows.
    /// Returns its id.  The column starts nonbasic.
    int add_column(double cost, std::vector<std::pair<int, double>> entries, double lo, double up);

    /// Removes a column.  Nonbasic columns are dropped immediately; a basic
    /// column sitting at a bound is pivoted out first.  Returns false (and
    /// keeps the column) when it is basic away from its bounds.
    bool remove_column(int id);

    bool is_alive(int id) const { return cols_[id].alive; }

    /// Runs phase 1 if the current basis is infeasible (or absent), then
    /// phase 2 to optimality.
    SolveStatus solve();

    double objective() const;
    double column_value(int id) const;
    /// Simplex multipliers of the equality rows under the true costs.
    std::vector<double> row_duals() const;

    int rows() const { return m_; }
    long iterations() const { return total_iters_; }

private:
    enum class ColState : std::uint8_t { AtLower, AtUpper, FreeZero, Basic };

    struct Column {
        std::vector<std::pair<int, double>> entries;
        double cost = 0.0;
        double lo = 0.0;
        double up = 0.0;
        ColState state = ColState::AtLower;
        int basis_pos = -1;
        bool alive = true;
        bool artificial = false;
    };

    struct Eta {
        Eigen::VectorXd d;
        int pos;
    };

    double nonbasic_value(const Column& c) const;
    void ftran(Eigen::VectorXd& v) const;
    void btran(Eigen::VectorXd& v) const;
    Eigen::VectorXd column_as_vector(const Column& c) const;
    void refactorize();
    void compute_basic_values();
    void install_crash_basis();
    double infeasibility() const;
    SolveStatus run_simplex(bool phase1);
    double phase_cost(const Column& c, bool phase1) const;
    void refresh_pricing(bool phase1);

    int m_;
    std::vector<double> rhs_;
    SimplexOptions opts_;
    std::vector<Column> cols_;
    std::vector<int> basic_;           // column id per basis position
    Eigen::VectorXd xb_;               // values of basic columns
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    std::vector<Eta> etas_;
    bool basis_ready_ = false;
    bool values_stale_ = false;
    long total_iters_ = 0;

    // Devex pricing state: maintained reduced costs and reference weights.
    std::vector<double> rc_;
    std::vector<double> weight_;
    bool pricing_stale_ = true;
};

}  // namespace mdauct
