#include <doctest.h>

#include <cmath>
#include <memory>

#include "mdauct/ebm.hpp"

using namespace mdauct;

namespace {

AuctionSetting make_setting(Box box, int t, int buyers, std::vector<double> costs,
                            DistributionSpec spec = DistributionSpec::uniform()) {
    auto grid = std::make_shared<const TypeGrid>(std::move(box), t);
    AuctionSetting setting;
    setting.buyers = buyers;
    setting.costs = std::move(costs);
    setting.density = discretize_density(spec, grid);
    setting.grid = std::move(grid);
    return setting;
}

/// Direct double-loop oracle for the two-buyer single-grade game with a
/// reserve: the winner pays max(reserve, loser value) when the best value
/// clears the reserve.
double two_buyer_reserve_oracle(const AuctionSetting& setting, double reserve) {
    const TypeGrid& grid = *setting.grid;
    double revenue = 0.0;
    for (int a = 0; a < grid.size(); ++a) {
        for (int b = 0; b < grid.size(); ++b) {
            const double high = std::max(grid.coord(a, 0), grid.coord(b, 0));
            const double low = std::min(grid.coord(a, 0), grid.coord(b, 0));
            if (high >= reserve) {
                revenue += setting.density[a] * setting.density[b] * std::max(reserve, low);
            }
        }
    }
    return revenue;
}

}  // namespace

TEST_CASE("posted price on the unit grid") {
    const auto setting = make_setting(Box{{0.0}, {1.0}}, 20, 1, {0.0});
    const EbmOutcome out = ebm_revenue_exact(setting, {{0.5}});
    CHECK(out.revenue == doctest::Approx(0.5 * 11.0 / 21.0).epsilon(1e-12));
    CHECK(std::abs(out.revenue - 0.25) <= 0.02);
    CHECK(out.sale_probability == doctest::Approx(11.0 / 21.0));
    REQUIRE(out.grade_shares.size() == 1);
    CHECK(out.grade_shares[0] == doctest::Approx(out.sale_probability));
}

TEST_CASE("free good with one buyer raises nothing") {
    const auto setting = make_setting(Box{{0.0}, {1.0}}, 20, 1, {0.0});
    const EbmOutcome out = ebm_revenue_exact(setting, {{0.0}});
    CHECK(out.revenue == doctest::Approx(0.0));
    CHECK(out.sale_probability == doctest::Approx(1.0));
}

TEST_CASE("two-buyer second-price revenue matches the direct oracle") {
    const auto setting = make_setting(Box{{0.0}, {1.0}}, 20, 2, {0.0});
    const EbmOutcome out = ebm_revenue_exact(setting, {{0.0}});
    CHECK(out.revenue == doctest::Approx(two_buyer_reserve_oracle(setting, 0.0)).epsilon(1e-12));
    CHECK(std::abs(out.revenue - 1.0 / 3.0) <= 0.02);

    // A positive reserve too.
    const EbmOutcome reserved = ebm_revenue_exact(setting, {{0.35}});
    CHECK(reserved.revenue ==
          doctest::Approx(two_buyer_reserve_oracle(setting, 0.35)).epsilon(1e-12));
}

TEST_CASE("serial and parallel enumeration agree") {
    const auto setting = make_setting(Box{{0.0, 0.0}, {1.0, 1.0}}, 8, 2, {0.0, 0.0},
                                      DistributionSpec::beta(1.0, 2.0));
    const EbmOutcome serial = ebm_revenue_exact(setting, {{0.3, 0.4}}, false);
    const EbmOutcome parallel = ebm_revenue_exact(setting, {{0.3, 0.4}}, true);
    CHECK(serial.revenue == doctest::Approx(parallel.revenue).epsilon(1e-13));
    CHECK(serial.sale_probability == doctest::Approx(parallel.sale_probability).epsilon(1e-13));
}

TEST_CASE("enumeration guard rejects oversized instances") {
    const auto setting = make_setting(Box{{0.0, 0.0}, {1.0, 1.0}}, 20, 3, {0.0, 0.0});
    CHECK_THROWS_AS(ebm_revenue_exact(setting, {{0.5, 0.5}}), std::invalid_argument);
}

TEST_CASE("monte carlo matches exact within sampling error") {
    const auto setting = make_setting(Box{{0.0, 0.0}, {1.0, 1.0}}, 10, 2, {0.0, 0.0});
    const PriceMenu menu{{0.4, 0.55}};
    const EbmOutcome exact = ebm_revenue_exact(setting, menu);
    const EbmOutcome mc = ebm_revenue_mc(setting, menu, 200000, 7);
    CHECK(mc.samples == 200000);
    CHECK(mc.std_error > 0.0);
    CHECK(std::abs(exact.revenue - mc.revenue) <= 4.0 * mc.std_error);

    // Deterministic for a fixed seed, serial or parallel.
    const EbmOutcome mc_serial = ebm_revenue_mc(setting, menu, 200000, 7, false);
    CHECK(mc.revenue == mc_serial.revenue);
    const EbmOutcome mc_other = ebm_revenue_mc(setting, menu, 200000, 8);
    CHECK(mc.revenue != mc_other.revenue);
}

TEST_CASE("zero samples are rejected") {
    const auto setting = make_setting(Box{{0.0}, {1.0}}, 4, 1, {0.0});
    CHECK_THROWS_AS(ebm_revenue_mc(setting, {{0.5}}, 0, 1), std::invalid_argument);
}

TEST_CASE("translating values and prices shifts revenue by the sale mass") {
    // Dyadic step and prices keep every comparison exact under the shift.
    const auto base = make_setting(Box{{0.0, 0.0}, {1.0, 1.0}}, 8, 2, {0.0, 0.0});
    const auto shifted = make_setting(Box{{5.0, 5.0}, {6.0, 6.0}}, 8, 2, {0.0, 0.0});
    const PriceMenu menu{{0.25, 0.5}};
    const PriceMenu menu_shifted{{5.25, 5.5}};
    const EbmOutcome a = ebm_revenue_exact(base, menu);
    const EbmOutcome b = ebm_revenue_exact(shifted, menu_shifted);
    CHECK(a.sale_probability == doctest::Approx(b.sale_probability).epsilon(1e-12));
    for (int j = 0; j < 2; ++j) {
        CHECK(a.grade_shares[j] == doctest::Approx(b.grade_shares[j]).epsilon(1e-12));
    }
    CHECK(b.revenue == doctest::Approx(a.revenue + 5.0 * a.sale_probability).epsilon(1e-12));
}

TEST_CASE("revenue is weakly increasing in the number of buyers") {
    const PriceMenu menu{{0.35, 0.5}};
    double prev = -1.0;
    for (int buyers : {1, 2, 3}) {
        const auto setting = make_setting(Box{{0.0, 0.0}, {1.0, 1.0}}, 6, buyers, {0.0, 0.0},
                                          DistributionSpec::beta(1.0, 2.0));
        const double rev = ebm_revenue_exact(setting, menu).revenue;
        CHECK(rev >= prev - 1e-12);
        prev = rev;
    }
}

TEST_CASE("price search finds the textbook reserve") {
    const auto setting = make_setting(Box{{0.0}, {1.0}}, 20, 1, {0.0});
    const EbmSearchResult best = optimize_ebm(setting, 20);
    CHECK(best.menu.prices[0] == doctest::Approx(0.5));
    CHECK(best.outcome.revenue == doctest::Approx(0.5 * 11.0 / 21.0).epsilon(1e-12));
}

TEST_CASE("withdrawing one grade reduces to the single-grade search") {
    const auto two = make_setting(Box{{0.0, 0.0}, {1.0, 1.0}}, 6, 2, {0.0, 0.0});
    const auto one = make_setting(Box{{0.0}, {1.0}}, 6, 2, {0.0});
    // Sentinel price on grade 2: nobody ever picks it, so revenue matches the
    // one-dimensional menu at the same grade-1 price.
    const EbmOutcome with_sentinel = ebm_revenue_exact(two, {{0.5, 2.0}});
    const EbmOutcome single = ebm_revenue_exact(one, {{0.5}});
    CHECK(with_sentinel.revenue == doctest::Approx(single.revenue).epsilon(1e-12));
    CHECK(with_sentinel.grade_shares[1] == doctest::Approx(0.0));
}

TEST_CASE("one-grade mechanism never beats the oracle") {
    const auto setting = make_setting(Box{{0.0}, {1.0}}, 20, 2, {0.0});
    const EbmSearchResult best = optimize_ebm(setting, 20);
    const double oracle = myerson_oracle(2, DistributionSpec::uniform(), setting.grid->box(), 0.0);
    CHECK(best.outcome.revenue <= oracle + 0.02);
}

TEST_CASE("oracle reproduces the closed forms") {
    const Box box{{0.0}, {1.0}};
    CHECK(myerson_oracle(1, DistributionSpec::uniform(), box, 0.0) ==
          doctest::Approx(0.25).epsilon(1e-6));
    CHECK(myerson_oracle(2, DistributionSpec::uniform(), box, 0.0) ==
          doctest::Approx(5.0 / 12.0).epsilon(1e-6));
    CHECK(myerson_oracle(3, DistributionSpec::uniform(), box, 0.0) ==
          doctest::Approx(17.0 / 32.0).epsilon(1e-6));
    // Positive cost moves the reserve: uniform with c gives reserve (1+c)/2
    // and single-buyer profit (1-c)^2/4.
    CHECK(myerson_oracle(1, DistributionSpec::uniform(), box, 0.4) ==
          doctest::Approx(0.09).epsilon(1e-5));
}

TEST_CASE("irregular distributions are rejected by the oracle") {
    const Box box{{0.0}, {1.0}};
    const auto bimodal = DistributionSpec::mixture(
        0.5, DistributionSpec::trunc_normal({0.15}, {0.04}),
        DistributionSpec::trunc_normal({0.85}, {0.04}));
    CHECK_THROWS_AS(myerson_oracle(1, bimodal, box, 0.0), std::domain_error);
}
