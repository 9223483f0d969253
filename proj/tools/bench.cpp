// Timing comparison of the serial reference kernels against their OpenMP
// counterparts: the full incentive-pair scan and the exclusive-buyer-game
// enumeration.  Run with no arguments for the default sizes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <omp.h>
#include <random>
#include <vector>

#include "mdauct/ebm.hpp"
#include "mdauct/separation.hpp"

using namespace mdauct;

namespace {

template <typename F>
double time_best_of(int reps, F&& body) {
    double best = 1e100;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (dt < best) best = dt;
    }
    return best;
}

AuctionSetting make_setting(int intervals, int buyers) {
    Box box{{0.0, 0.0}, {1.0, 1.0}};
    auto grid = std::make_shared<const TypeGrid>(box, intervals);
    AuctionSetting setting;
    setting.buyers = buyers;
    setting.costs = {0.0, 0.0};
    setting.density = discretize_density(DistributionSpec::uniform(), grid);
    setting.grid = std::move(grid);
    return setting;
}

}  // namespace

int main(int argc, char** argv) {
    int intervals = 20;
    if (argc > 1) intervals = std::atoi(argv[1]);
    const AuctionSetting setting = make_setting(intervals, 2);
    const TypeGrid& grid = *setting.grid;
    const int n = grid.size();
    const int qualities = 2;

    std::printf("threads: %d, grid: %d points\n", omp_get_max_threads(), n);

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> q(static_cast<std::size_t>(n) * qualities);
    std::vector<double> u(n);
    for (double& x : q) x = 0.5 * uni(rng);
    for (double& x : u) x = uni(rng);

    const RegionSpec full{1, IccScanMode::Full};
    std::vector<Violation> serial_icc, parallel_icc;
    const double t_icc_s = time_best_of(
        3, [&] { serial_icc = find_icc_violations(q, u, grid, full, 1e-7, false); });
    const double t_icc_p = time_best_of(
        3, [&] { parallel_icc = find_icc_violations(q, u, grid, full, 1e-7, true); });
    const bool icc_match = serial_icc.size() == parallel_icc.size();
    std::printf("icc full scan     serial %8.4f s   omp %8.4f s   speedup %.2fx   (%zu hits%s)\n",
                t_icc_s, t_icc_p, t_icc_s / t_icc_p, serial_icc.size(),
                icc_match ? "" : ", MISMATCH");

    const PriceMenu menu{{0.4, 0.5}};
    EbmOutcome serial_ebm, parallel_ebm;
    const double t_ebm_s =
        time_best_of(3, [&] { serial_ebm = ebm_revenue_exact(setting, menu, false); });
    const double t_ebm_p =
        time_best_of(3, [&] { parallel_ebm = ebm_revenue_exact(setting, menu, true); });
    const double drift = std::abs(serial_ebm.revenue - parallel_ebm.revenue);
    std::printf("ebm exact (N=2)   serial %8.4f s   omp %8.4f s   speedup %.2fx   (|diff| %.2e)\n",
                t_ebm_s, t_ebm_p, t_ebm_s / t_ebm_p, drift);

    EbmOutcome serial_mc, parallel_mc;
    const long samples = 2000000;
    const double t_mc_s = time_best_of(
        2, [&] { serial_mc = ebm_revenue_mc(setting, menu, samples, 1, false); });
    const double t_mc_p = time_best_of(
        2, [&] { parallel_mc = ebm_revenue_mc(setting, menu, samples, 1, true); });
    const double mc_drift = std::abs(serial_mc.revenue - parallel_mc.revenue);
    std::printf("ebm mc (2M draws) serial %8.4f s   omp %8.4f s   speedup %.2fx   (|diff| %.2e)\n",
                t_mc_s, t_mc_p, t_mc_s / t_mc_p, mc_drift);

    return 0;
}
