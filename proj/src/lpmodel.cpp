#include "mdauct/lpmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mdauct {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t hash_combine(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}
}  // namespace

void validate_setting(const AuctionSetting& setting) {
    if (setting.buyers < 1) throw std::invalid_argument("buyer count must be >= 1");
    if (setting.costs.empty()) throw std::invalid_argument("at least one quality grade required");
    if (!setting.grid) throw std::invalid_argument("setting has no grid");
    if (setting.grid->dim() != static_cast<int>(setting.costs.size())) {
        throw std::invalid_argument("cost vector length must match grid dimension");
    }
    if (setting.density.grid.get() != setting.grid.get()) {
        throw std::invalid_argument("density must be built on the setting's grid");
    }
    for (double c : setting.costs) {
        if (c < 0.0) throw std::invalid_argument("costs must be nonnegative");
    }
}

bool same_constraint(const ConstraintRef& a, const ConstraintRef& b) {
    return a == b;
}

std::size_t constraint_hash(const ConstraintRef& ref) {
    struct Visitor {
        std::size_t operator()(const IccRef& r) const {
            return hash_combine(hash_combine(1, std::hash<int>{}(r.from)),
                                std::hash<int>{}(r.to));
        }
        std::size_t operator()(const BorderRef& r) const {
            std::size_t h = 2;
            for (int m : r.members) h = hash_combine(h, std::hash<int>{}(m));
            return h;
        }
        std::size_t operator()(const LowerCornerRef&) const { return 3; }
        std::size_t operator()(const NonNegRef& r) const {
            return hash_combine(hash_combine(4, std::hash<int>{}(r.point)),
                                std::hash<int>{}(r.quality));
        }
    };
    return std::visit(Visitor{}, ref);
}

std::string describe(const ConstraintRef& ref) {
    struct Visitor {
        std::string operator()(const IccRef& r) const {
            return "icc(" + std::to_string(r.from) + "," + std::to_string(r.to) + ")";
        }
        std::string operator()(const BorderRef& r) const {
            return "border(level=" + std::to_string(r.level) +
                   ",size=" + std::to_string(r.members.size()) + ")";
        }
        std::string operator()(const LowerCornerRef&) const { return "corner"; }
        std::string operator()(const NonNegRef& r) const {
            return "nonneg(" + std::to_string(r.point) + "," + std::to_string(r.quality) + ")";
        }
    };
    return std::visit(Visitor{}, ref);
}

std::vector<double> build_objective(const AuctionSetting& setting, const VariableLayout& layout) {
    const TypeGrid& grid = *setting.grid;
    const int n = grid.size();
    const int qualities = layout.qualities();
    std::vector<double> obj(layout.count(), 0.0);
    for (int v = 0; v < n; ++v) {
        const double f = setting.density[v];
        for (int j = 0; j < qualities; ++j) {
            obj[layout.q_var(v, j)] = f * (grid.coord(v, j) - setting.costs[j]);
        }
        obj[layout.u_var(v)] = -f;
    }
    return obj;
}

Row icc_row(const VariableLayout& layout, int v, int vhat, const TypeGrid& grid) {
    if (v == vhat) throw std::invalid_argument("icc pair needs two distinct points");
    Row row;
    row.sense = RowSense::GreaterEqual;
    row.rhs = 0.0;
    row.ref = IccRef{v, vhat};
    row.coeffs.reserve(static_cast<std::size_t>(layout.qualities()) + 2);
    row.coeffs.emplace_back(layout.u_var(v), 1.0);
    row.coeffs.emplace_back(layout.u_var(vhat), -1.0);
    for (int j = 0; j < layout.qualities(); ++j) {
        const double d = grid.coord(v, j) - grid.coord(vhat, j);
        if (d != 0.0) {
            row.coeffs.emplace_back(layout.q_var(vhat, j), -d);
        }
    }
    return row;
}

Row border_row(const VariableLayout& layout, std::vector<int> members,
               const AuctionSetting& setting, int level) {
    if (members.empty()) throw std::invalid_argument("border set must be nonempty");
    std::sort(members.begin(), members.end());

    const int buyers = setting.buyers;
    double inside = 0.0;
    Row row;
    row.sense = RowSense::LessEqual;
    row.coeffs.reserve(members.size() * static_cast<std::size_t>(layout.qualities()));
    for (int v : members) {
        const double f = setting.density[v];
        inside += f;
        if (f == 0.0) continue;
        for (int j = 0; j < layout.qualities(); ++j) {
            row.coeffs.emplace_back(layout.q_var(v, j), buyers * f);
        }
    }
    const double outside = std::clamp(1.0 - inside, 0.0, 1.0);
    row.rhs = 1.0 - std::pow(outside, buyers);
    row.ref = BorderRef{level, std::move(members)};
    return row;
}

LinearProgram base_program(const AuctionSetting& setting, const VariableLayout& layout) {
    LinearProgram lp;
    lp.num_vars = layout.count();
    lp.objective = build_objective(setting, layout);
    lp.lower.assign(lp.num_vars, 0.0);
    lp.upper.assign(lp.num_vars, kInf);

    // Q_j(v) <= 1 is implied by the singleton Border sets; U >= 0 by
    // rationality.  Installing them as bounds keeps every relaxation of the
    // cut loop bounded without adding rows.
    const int n = layout.grid_size();
    for (int v = 0; v < n; ++v) {
        for (int j = 0; j < layout.qualities(); ++j) {
            lp.upper[layout.q_var(v, j)] = 1.0;
        }
    }

    Row corner;
    corner.sense = RowSense::Equal;
    corner.rhs = 0.0;
    corner.ref = LowerCornerRef{};
    corner.coeffs.emplace_back(layout.u_var(setting.grid->lower_corner()), 1.0);
    lp.rows.push_back(std::move(corner));
    return lp;
}

}  // namespace mdauct
