#include "mdauct/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mdauct {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::IterationLimit: return "iteration limit";
    }
    return "unknown";
}

SimplexCore::SimplexCore(int rows, std::vector<double> rhs, SimplexOptions opts)
    : m_(rows), rhs_(std::move(rhs)), opts_(opts) {
    if (m_ < 1) throw std::invalid_argument("simplex needs at least one row");
    if (static_cast<int>(rhs_.size()) != m_) {
        throw std::invalid_argument("rhs size must match row count");
    }
    // Balance eta-file growth against the cubic refactorization cost.
    opts_.refactor_interval = std::clamp(m_ / 2, opts_.refactor_interval, 800);
}

int SimplexCore::add_column(double cost, std::vector<std::pair<int, double>> entries, double lo,
                            double up) {
    if (lo > up) throw std::invalid_argument("column bounds crossed");
    for (const auto& [row, coef] : entries) {
        if (row < 0 || row >= m_) throw std::invalid_argument("column entry row out of range");
        (void)coef;
    }
    Column c;
    c.entries = std::move(entries);
    c.cost = cost;
    c.lo = lo;
    c.up = up;
    if (std::isfinite(lo)) {
        c.state = ColState::AtLower;
    } else if (std::isfinite(up)) {
        c.state = ColState::AtUpper;
    } else {
        c.state = ColState::FreeZero;
    }
    cols_.push_back(std::move(c));
    pricing_stale_ = true;
    const int id = static_cast<int>(cols_.size()) - 1;
    // A new nonbasic column shifts basic values unless it sits at zero.
    if (basis_ready_ && nonbasic_value(cols_[id]) != 0.0) {
        values_stale_ = true;
    }
    return id;
}

bool SimplexCore::remove_column(int id) {
    Column& c = cols_[id];
    if (!c.alive) return true;
    if (c.state != ColState::Basic) {
        if (basis_ready_ && nonbasic_value(c) != 0.0) values_stale_ = true;
        c.alive = false;
        return true;
    }
    // Basic: only removable while resting on one of its bounds.
    if (values_stale_) {
        compute_basic_values();
        values_stale_ = false;
    }
    const int pos = c.basis_pos;
    const double val = xb_[pos];
    double bound;
    ColState exit_state;
    if (std::isfinite(c.lo) && std::abs(val - c.lo) <= 1e-7 * (1.0 + std::abs(c.lo))) {
        bound = c.lo;
        exit_state = ColState::AtLower;
    } else if (std::isfinite(c.up) && std::abs(val - c.up) <= 1e-7 * (1.0 + std::abs(c.up))) {
        bound = c.up;
        exit_state = ColState::AtUpper;
    } else {
        return false;
    }
    // Degenerate pivot: bring in any nonbasic column with a usable pivot
    // element in this basis row.
    int best = -1;
    double best_piv = opts_.pivot_tol * 100.0;
    Eigen::VectorXd best_d;
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m_);
    e[pos] = 1.0;
    btran(e);  // e = row pos of B^-1
    for (int q = 0; q < static_cast<int>(cols_.size()); ++q) {
        const Column& cand = cols_[q];
        if (!cand.alive || cand.state == ColState::Basic || q == id || cand.lo == cand.up) continue;
        double dot = 0.0;
        for (const auto& [row, coef] : cand.entries) dot += e[row] * coef;
        if (std::abs(dot) > best_piv) {
            best_piv = std::abs(dot);
            best = q;
        }
    }
    if (best < 0) return false;

    Eigen::VectorXd d = column_as_vector(cols_[best]);
    ftran(d);
    if (std::abs(d[pos]) <= opts_.pivot_tol) return false;

    etas_.push_back({d, pos});
    Column& enter = cols_[best];
    basic_[pos] = best;
    xb_[pos] = nonbasic_value(enter);
    enter.state = ColState::Basic;
    enter.basis_pos = pos;
    c.state = exit_state;
    c.basis_pos = -1;
    c.alive = false;
    values_stale_ = true;
    pricing_stale_ = true;
    (void)bound;
    if (static_cast<int>(etas_.size()) >= opts_.refactor_interval) refactorize();
    return true;
}

double SimplexCore::nonbasic_value(const Column& c) const {
    switch (c.state) {
        case ColState::AtLower: return c.lo;
        case ColState::AtUpper: return c.up;
        case ColState::FreeZero: return 0.0;
        case ColState::Basic: break;
    }
    throw std::logic_error("basic column has no nonbasic value");
}

Eigen::VectorXd SimplexCore::column_as_vector(const Column& c) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(m_);
    for (const auto& [row, coef] : c.entries) v[row] += coef;
    return v;
}

void SimplexCore::ftran(Eigen::VectorXd& v) const {
    v = lu_.solve(v);
    for (const Eta& eta : etas_) {
        const double piv = v[eta.pos] / eta.d[eta.pos];
        if (piv != 0.0) {
            v.noalias() -= piv * eta.d;
            v[eta.pos] = piv;
        } else {
            v[eta.pos] = 0.0;
        }
    }
}

void SimplexCore::btran(Eigen::VectorXd& v) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
        const double wp = v[it->pos];
        const double dot = it->d.dot(v) - it->d[it->pos] * wp;
        v[it->pos] = (wp - dot) / it->d[it->pos];
    }
    v = lu_.transpose().solve(v);
}

void SimplexCore::refactorize() {
    Eigen::MatrixXd basis(m_, m_);
    basis.setZero();
    for (int p = 0; p < m_; ++p) {
        const Column& c = cols_[basic_[p]];
        for (const auto& [row, coef] : c.entries) basis(row, p) += coef;
    }
    lu_.compute(basis);
    etas_.clear();
    compute_basic_values();
    pricing_stale_ = true;
}

void SimplexCore::compute_basic_values() {
    Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(rhs_.data(), m_);
    for (const Column& c : cols_) {
        if (!c.alive || c.state == ColState::Basic) continue;
        const double v = nonbasic_value(c);
        if (v == 0.0) continue;
        for (const auto& [row, coef] : c.entries) r[row] -= coef * v;
    }
    ftran(r);
    xb_ = r;
}

void SimplexCore::install_crash_basis() {
    basic_.assign(m_, -1);
    // Residual once every column rests at its nonbasic value.
    std::vector<double> resid(rhs_);
    for (Column& c : cols_) {
        if (!c.alive) continue;
        if (c.state == ColState::Basic) {
            c.state = std::isfinite(c.lo) ? ColState::AtLower
                                          : (std::isfinite(c.up) ? ColState::AtUpper
                                                                 : ColState::FreeZero);
            c.basis_pos = -1;
        }
        const double v = nonbasic_value(c);
        if (v == 0.0) continue;
        for (const auto& [row, coef] : c.entries) resid[row] -= coef * v;
    }
    // Prefer singleton columns whose implied value is feasible.
    for (int id = 0; id < static_cast<int>(cols_.size()); ++id) {
        Column& c = cols_[id];
        if (!c.alive || c.artificial || c.entries.size() != 1) continue;
        const auto& [row, coef] = c.entries.front();
        if (basic_[row] >= 0 || std::abs(coef) < 1e-12) continue;
        const double implied = nonbasic_value(c) + resid[row] / coef;
        if (implied >= c.lo - opts_.feas_tol && implied <= c.up + opts_.feas_tol) {
            basic_[row] = id;
            c.state = ColState::Basic;
            c.basis_pos = row;
        }
    }
    // Artificials complete the basis.
    for (int row = 0; row < m_; ++row) {
        if (basic_[row] >= 0) continue;
        Column art;
        art.entries = {{row, resid[row] >= 0.0 ? 1.0 : -1.0}};
        art.cost = 0.0;
        art.lo = 0.0;
        art.up = kInf;
        art.artificial = true;
        art.state = ColState::Basic;
        art.basis_pos = row;
        cols_.push_back(std::move(art));
        basic_[row] = static_cast<int>(cols_.size()) - 1;
    }
    refactorize();
    basis_ready_ = true;
}

double SimplexCore::infeasibility() const {
    double total = 0.0;
    for (int p = 0; p < m_; ++p) {
        const Column& c = cols_[basic_[p]];
        if (c.artificial) total += std::abs(xb_[p]);
    }
    return total;
}

double SimplexCore::phase_cost(const Column& c, bool phase1) const {
    if (phase1) return c.artificial ? 1.0 : 0.0;
    return c.cost;
}

void SimplexCore::refresh_pricing(bool phase1) {
    Eigen::VectorXd pi(m_);
    for (int p = 0; p < m_; ++p) pi[p] = phase_cost(cols_[basic_[p]], phase1);
    btran(pi);
    rc_.assign(cols_.size(), 0.0);
    weight_.assign(cols_.size(), 1.0);
    for (std::size_t q = 0; q < cols_.size(); ++q) {
        const Column& c = cols_[q];
        if (!c.alive || c.state == ColState::Basic) continue;
        double dot = 0.0;
        for (const auto& [row, coef] : c.entries) dot += pi[row] * coef;
        rc_[q] = phase_cost(c, phase1) - dot;
    }
    pricing_stale_ = false;
}

SolveStatus SimplexCore::run_simplex(bool phase1) {
    const long max_iters =
        opts_.max_iterations > 0
            ? opts_.max_iterations
            : std::max<long>(50000, 60L * m_ + 10L * static_cast<long>(cols_.size()));
    long degenerate_streak = 0;
    bool bland = false;
    refresh_pricing(phase1);

    for (long iter = 0; iter < max_iters; ++iter) {
        ++total_iters_;
        if (pricing_stale_) refresh_pricing(phase1);

        int enter = -1;
        int direction = 0;
        double best_score = 0.0;
        for (int q = 0; q < static_cast<int>(cols_.size()); ++q) {
            const Column& c = cols_[q];
            if (!c.alive || c.state == ColState::Basic || c.lo == c.up) continue;
            if (phase1 && c.artificial) continue;
            const double r = rc_[q];
            int dir = 0;
            if (c.state == ColState::AtLower && r < -opts_.opt_tol) {
                dir = 1;
            } else if (c.state == ColState::AtUpper && r > opts_.opt_tol) {
                dir = -1;
            } else if (c.state == ColState::FreeZero && std::abs(r) > opts_.opt_tol) {
                dir = r < 0.0 ? 1 : -1;
            }
            if (dir == 0) continue;
            if (bland) {  // first eligible id
                enter = q;
                direction = dir;
                break;
            }
            const double score = r * r / weight_[q];
            if (score > best_score * (1.0 + 1e-12)) {
                best_score = score;
                enter = q;
                direction = dir;
            }
        }
        if (enter < 0) {
            // Maintained reduced costs drift; certify optimality fresh.
            refresh_pricing(phase1);
            bool any = false;
            for (int q = 0; q < static_cast<int>(cols_.size()) && !any; ++q) {
                const Column& c = cols_[q];
                if (!c.alive || c.state == ColState::Basic || c.lo == c.up) continue;
                if (phase1 && c.artificial) continue;
                any = (c.state == ColState::AtLower && rc_[q] < -opts_.opt_tol) ||
                      (c.state == ColState::AtUpper && rc_[q] > opts_.opt_tol) ||
                      (c.state == ColState::FreeZero && std::abs(rc_[q]) > opts_.opt_tol);
            }
            if (!any) return SolveStatus::Optimal;
            continue;
        }

        Column& ec = cols_[enter];
        Eigen::VectorXd d = column_as_vector(ec);
        ftran(d);

        // Ratio test: how far can the entering column move?
        double theta = kInf;
        if (std::isfinite(ec.lo) && std::isfinite(ec.up)) theta = ec.up - ec.lo;
        int leave_pos = -1;
        double leave_piv = 0.0;
        for (int p = 0; p < m_; ++p) {
            const double dp = direction * d[p];
            if (std::abs(dp) <= opts_.pivot_tol) continue;
            const Column& bc = cols_[basic_[p]];
            double limit;
            if (dp > 0.0) {  // basic value decreases
                if (!std::isfinite(bc.lo)) continue;
                limit = (xb_[p] - bc.lo) / dp;
            } else {  // basic value increases
                if (!std::isfinite(bc.up)) continue;
                limit = (xb_[p] - bc.up) / dp;
            }
            limit = std::max(limit, 0.0);
            if (limit < theta - 1e-12 ||
                (limit < theta + 1e-12 &&
                 (leave_pos < 0 || std::abs(dp) > std::abs(leave_piv) + 1e-15))) {
                theta = limit;
                leave_pos = p;
                leave_piv = dp;
            }
        }

        if (!std::isfinite(theta)) {
            return phase1 ? SolveStatus::Infeasible : SolveStatus::Unbounded;
        }

        if (theta <= 1e-12) {
            if (++degenerate_streak > 400 && !bland) bland = true;
        } else {
            degenerate_streak = 0;
            bland = false;
        }

        if (leave_pos < 0) {
            // Bound flip: entering variable crosses to its other bound.
            // The basis is untouched, so reduced costs stay valid.
            const double step = direction * theta;
            for (int p = 0; p < m_; ++p) xb_[p] -= step * d[p];
            ec.state = direction > 0 ? ColState::AtUpper : ColState::AtLower;
            continue;
        }

        // Devex updates need the pivot row of the outgoing basis.
        const double alpha = d[leave_pos];
        Eigen::VectorXd rho = Eigen::VectorXd::Zero(m_);
        rho[leave_pos] = 1.0;
        btran(rho);
        const double rc_enter = rc_[enter];
        const double w_enter = weight_[enter];
        const int leave_id = basic_[leave_pos];
        for (int q = 0; q < static_cast<int>(cols_.size()); ++q) {
            Column& c = cols_[q];
            if (!c.alive || c.state == ColState::Basic || q == enter) continue;
            double a = 0.0;
            for (const auto& [row, coef] : c.entries) a += rho[row] * coef;
            if (a != 0.0) {
                rc_[q] -= (rc_enter / alpha) * a;
                const double ratio = a / alpha;
                weight_[q] = std::max(weight_[q], ratio * ratio * w_enter);
            }
        }

        // Pivot: entering takes basis position leave_pos.
        Column& lc = cols_[leave_id];
        const double step = direction * theta;
        for (int p = 0; p < m_; ++p) xb_[p] -= step * d[p];
        const double enter_value = nonbasic_value(ec) + step;
        lc.state = direction * d[leave_pos] > 0.0 ? ColState::AtLower : ColState::AtUpper;
        if (!std::isfinite(lc.lo) && lc.state == ColState::AtLower) lc.state = ColState::FreeZero;
        if (!std::isfinite(lc.up) && lc.state == ColState::AtUpper) lc.state = ColState::FreeZero;
        lc.basis_pos = -1;
        ec.state = ColState::Basic;
        ec.basis_pos = leave_pos;
        basic_[leave_pos] = enter;
        xb_[leave_pos] = enter_value;
        rc_[leave_id] = -rc_enter / alpha;
        rc_[enter] = 0.0;
        weight_[leave_id] = std::max(w_enter / (alpha * alpha), 1.0);
        etas_.push_back({std::move(d), leave_pos});
        if (static_cast<int>(etas_.size()) >= opts_.refactor_interval) refactorize();
    }
    return SolveStatus::IterationLimit;
}

SolveStatus SimplexCore::solve() {
    if (!basis_ready_) {
        install_crash_basis();
    } else if (values_stale_) {
        compute_basic_values();
        values_stale_ = false;
    }

    // A warm basis can lose feasibility when columns were edited at nonzero
    // bounds; rebuild from scratch in that case.
    double bound_violation = 0.0;
    for (int p = 0; p < m_; ++p) {
        const Column& c = cols_[basic_[p]];
        if (c.artificial) continue;
        if (std::isfinite(c.lo)) bound_violation = std::max(bound_violation, c.lo - xb_[p]);
        if (std::isfinite(c.up)) bound_violation = std::max(bound_violation, xb_[p] - c.up);
    }
    if (bound_violation > 100.0 * opts_.feas_tol) install_crash_basis();

    if (infeasibility() > opts_.feas_tol * (1.0 + static_cast<double>(m_))) {
        const SolveStatus s1 = run_simplex(true);
        if (s1 == SolveStatus::IterationLimit) return s1;
        if (infeasibility() > 1e-7) return SolveStatus::Infeasible;
    }
    // Freeze any artificial still hanging around at zero.
    for (Column& c : cols_) {
        if (c.artificial && c.alive) {
            c.lo = 0.0;
            c.up = 0.0;
            if (c.state != ColState::Basic) c.state = ColState::AtLower;
        }
    }
    return run_simplex(false);
}

double SimplexCore::objective() const {
    double obj = 0.0;
    for (int id = 0; id < static_cast<int>(cols_.size()); ++id) {
        const Column& c = cols_[id];
        if (!c.alive || c.artificial) continue;
        obj += c.cost * column_value(id);
    }
    return obj;
}

double SimplexCore::column_value(int id) const {
    const Column& c = cols_[id];
    if (!c.alive) return 0.0;
    if (c.state == ColState::Basic) return xb_[c.basis_pos];
    return nonbasic_value(c);
}

std::vector<double> SimplexCore::row_duals() const {
    Eigen::VectorXd pi(m_);
    for (int p = 0; p < m_; ++p) pi[p] = cols_[basic_[p]].cost;
    btran(pi);
    return std::vector<double>(pi.data(), pi.data() + m_);
}

}  // namespace mdauct
