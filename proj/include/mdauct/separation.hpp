#pragma once

#include <span>
#include <vector>

#include "mdauct/lpmodel.hpp"

namespace mdauct {

enum class IccScanMode : std::uint8_t { Local, Full };

/// Which incentive pairs a scan examines: every ordered pair (Full) or, for
/// each point, its step-1 neighbours plus the downward block of side L.
struct RegionSpec {
    int level = 1;
    IccScanMode mode = IccScanMode::Local;
};

/// A constraint the current solution violates, by how much.
struct Violation {
    ConstraintRef ref;
    double amount = 0.0;
};

/// Grid indices reachable from v in Local mode: all points at Chebyshev
/// grid-distance exactly one, plus every point at most `level` steps below v
/// in every dimension.  Sorted ascending; v itself excluded.
std::vector<int> local_region(int v, int level, const TypeGrid& grid);

/// Scans incentive pairs (v, vhat) against the solution (q row-major
/// grid x J, u per point); returns pairs violated by more than tol, ordered
/// by (v, vhat).  `parallel` switches between the serial reference scan and
/// the OpenMP kernel; both produce identical output.
std::vector<Violation> find_icc_violations(std::span<const double> q, std::span<const double> u,
                                           const TypeGrid& grid, const RegionSpec& region,
                                           double tol, bool parallel = true);

/// Border separation via the sorted-prefix reduction: sort points by total
/// allocation s(v) descending (ties by index), and test every prefix set.
/// Returns all violated prefixes with their member sets.
std::vector<Violation> find_border_violations(std::span<const double> q,
                                              const AuctionSetting& setting, double tol);

}  // namespace mdauct
