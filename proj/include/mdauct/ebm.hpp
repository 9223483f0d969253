#pragma once

#include <cstdint>
#include <vector>

#include "mdauct/lpmodel.hpp"

namespace mdauct {

/// Per-grade price menu of an exclusive buyer mechanism.  A price above the
/// box effectively withdraws that grade.
struct PriceMenu {
    std::vector<double> prices;
};

struct EbmOutcome {
    double revenue = 0.0;
    double sale_probability = 0.0;
    std::vector<double> grade_shares;  // sum equals sale_probability
    double std_error = 0.0;            // Monte Carlo runs only
    long samples = 0;                  // Monte Carlo runs only
};

/// Largest type-tuple enumeration handled exactly.
inline constexpr double kEbmEnumerationGuard = 1e7;

/// Expected revenue of the menu under the exclusive buyer game, by exact
/// enumeration of all type tuples weighted by the discrete density.  Buyers
/// compete in a second-price auction for the exclusive right, bidding
/// beta = max_j(v_j - p_j) against a zero reserve; the winner (ties to the
/// lowest buyer index) pays the premium max(0, second-highest beta) plus the
/// menu price of the grade attaining its beta (ties to the lowest grade).
EbmOutcome ebm_revenue_exact(const AuctionSetting& setting, const PriceMenu& menu,
                             bool parallel = true);

/// Same game on i.i.d. draws from the discrete density; deterministic for a
/// fixed seed regardless of thread count.
EbmOutcome ebm_revenue_mc(const AuctionSetting& setting, const PriceMenu& menu, long samples,
                          std::uint64_t seed, bool parallel = true);

struct EbmSearchResult {
    PriceMenu menu;
    EbmOutcome outcome;
};

/// Exhaustive search over the Cartesian price grid (step = range/resolution
/// per grade, plus a withdraw sentinel).  Falls back to Monte Carlo with
/// common random numbers when exact enumeration would exceed the guard.
/// Ties resolve to the lexicographically smallest menu.
EbmSearchResult optimize_ebm(const AuctionSetting& setting, int resolution,
                             long mc_samples = 200000, std::uint64_t seed = 1);

/// Revenue of the optimal one-dimensional auction (virtual-value reserve,
/// second-price allocation) for a regular distribution on [box], by numeric
/// integration.  Used to validate the LP at J = 1.
double myerson_oracle(int buyers, const DistributionSpec& dist, const Box& box, double cost);

}  // namespace mdauct
