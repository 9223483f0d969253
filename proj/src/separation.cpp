#include "mdauct/separation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mdauct {

namespace {

/// U(v) - U(vhat) - sum_j (v_j - vhat_j) Q_j(vhat); negative means violated.
double icc_slack(std::span<const double> q, std::span<const double> u, const TypeGrid& grid,
                 int v, int vhat) {
    const int qualities = grid.dim();
    double lhs = u[v] - u[vhat];
    const double* qv = q.data() + static_cast<std::size_t>(vhat) * qualities;
    for (int j = 0; j < qualities; ++j) {
        lhs -= (grid.coord(v, j) - grid.coord(vhat, j)) * qv[j];
    }
    return lhs;
}

void scan_point(std::span<const double> q, std::span<const double> u, const TypeGrid& grid,
                const RegionSpec& region, double tol, int v, std::vector<Violation>& out) {
    if (region.mode == IccScanMode::Full) {
        const int n = grid.size();
        for (int vhat = 0; vhat < n; ++vhat) {
            if (vhat == v) continue;
            const double s = icc_slack(q, u, grid, v, vhat);
            if (s < -tol) out.push_back({IccRef{v, vhat}, -s});
        }
    } else {
        for (int vhat : local_region(v, region.level, grid)) {
            const double s = icc_slack(q, u, grid, v, vhat);
            if (s < -tol) out.push_back({IccRef{v, vhat}, -s});
        }
    }
}

}  // namespace

std::vector<int> local_region(int v, int level, const TypeGrid& grid) {
    const int dim = grid.dim();
    const std::vector<int> center = grid.multi_index(v);
    std::vector<int> out;

    // Chebyshev shell at distance one, any direction.
    std::vector<int> offset(dim, -1);
    std::vector<int> multi(dim);
    while (true) {
        bool zero = true, ok = true;
        for (int j = 0; j < dim; ++j) {
            if (offset[j] != 0) zero = false;
            multi[j] = center[j] + offset[j];
            if (multi[j] < 0 || multi[j] >= grid.points_per_dim(j)) ok = false;
        }
        if (!zero && ok) out.push_back(grid.flat_index(multi));
        int j = dim - 1;
        while (j >= 0 && ++offset[j] > 1) offset[j--] = -1;
        if (j < 0) break;
    }

    // Downward block: up to `level` steps below in every dimension.
    offset.assign(dim, 0);
    while (true) {
        bool zero = true, ok = true;
        for (int j = 0; j < dim; ++j) {
            if (offset[j] != 0) zero = false;
            multi[j] = center[j] - offset[j];
            if (multi[j] < 0) ok = false;
        }
        if (!zero && ok) out.push_back(grid.flat_index(multi));
        int j = dim - 1;
        while (j >= 0 && ++offset[j] > level) offset[j--] = 0;
        if (j < 0) break;
    }

    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Violation> find_icc_violations(std::span<const double> q, std::span<const double> u,
                                           const TypeGrid& grid, const RegionSpec& region,
                                           double tol, bool parallel) {
    const int n = grid.size();
    if (!parallel) {
        std::vector<Violation> out;
        for (int v = 0; v < n; ++v) scan_point(q, u, grid, region, tol, v, out);
        return out;
    }

    // Fixed-size chunks merged in order keep the output identical to the
    // serial scan for any thread count.
    constexpr int kChunk = 16;
    const int chunks = (n + kChunk - 1) / kChunk;
    std::vector<std::vector<Violation>> partial(chunks);
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < chunks; ++c) {
        const int lo = c * kChunk;
        const int hi = std::min(n, lo + kChunk);
        for (int v = lo; v < hi; ++v) scan_point(q, u, grid, region, tol, v, partial[c]);
    }
    std::vector<Violation> out;
    std::size_t total = 0;
    for (const auto& p : partial) total += p.size();
    out.reserve(total);
    for (auto& p : partial) out.insert(out.end(), p.begin(), p.end());
    return out;
}

std::vector<Violation> find_border_violations(std::span<const double> q,
                                              const AuctionSetting& setting, double tol) {
    const TypeGrid& grid = *setting.grid;
    const int n = grid.size();
    const int qualities = grid.dim();
    const int buyers = setting.buyers;

    std::vector<double> total(n, 0.0);
    for (int v = 0; v < n; ++v) {
        const double* qv = q.data() + static_cast<std::size_t>(v) * qualities;
        for (int j = 0; j < qualities; ++j) total[v] += qv[j];
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (total[a] != total[b]) return total[a] > total[b];
        return a < b;
    });

    std::vector<Violation> out;
    double lhs = 0.0;
    double inside = 0.0;
    for (int k = 0; k < n; ++k) {
        const int v = order[k];
        const double f = setting.density[v];
        inside += f;
        lhs += buyers * f * total[v];
        const double outside = std::clamp(1.0 - inside, 0.0, 1.0);
        const double rhs = 1.0 - std::pow(outside, buyers);
        if (lhs - rhs > tol) {
            std::vector<int> members(order.begin(), order.begin() + k + 1);
            std::sort(members.begin(), members.end());
            out.push_back({BorderRef{k + 1, std::move(members)}, lhs - rhs});
        }
    }
    return out;
}

}  // namespace mdauct
