#include "mdauct/ebm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace mdauct {

namespace {

/// Outcome of one play: price paid (0 if no trade) and chosen grade (-1).
struct Play {
    double paid = 0.0;
    int grade = -1;
};

/// types[i*J + j] = buyer i's value for grade j.  Buyers bid their surplus
/// beta_i = max_j(v_ij - p_j) for the exclusive right; the best bid wins
/// (ties to the lowest index) when it clears the zero reserve, pays the
/// second-highest nonnegative bid as the premium, and buys the grade that
/// attains its beta (ties to the lowest grade) at the menu price.
Play play_game(const double* types, int buyers, int qualities, const std::vector<double>& prices) {
    int winner = -1;
    double best_beta = 0.0;
    double second_beta = 0.0;
    for (int i = 0; i < buyers; ++i) {
        double beta = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < qualities; ++j) {
            beta = std::max(beta, types[i * qualities + j] - prices[j]);
        }
        if (beta < 0.0) continue;
        if (winner < 0 || beta > best_beta) {
            second_beta = winner < 0 ? 0.0 : best_beta;
            winner = i;
            best_beta = beta;
        } else {
            second_beta = std::max(second_beta, beta);
        }
    }
    if (winner < 0) return {};

    Play play;
    double best_surplus = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < qualities; ++j) {
        const double surplus = types[winner * qualities + j] - prices[j];
        if (surplus > best_surplus) {
            play.grade = j;
            play.paid = second_beta + prices[j];
            best_surplus = surplus;
        }
    }
    return play;
}

struct Accumulator {
    double revenue = 0.0;
    double revenue_sq = 0.0;
    double sale = 0.0;
    std::vector<double> shares;

    explicit Accumulator(int qualities) : shares(qualities, 0.0) {}

    void add(const Play& play, double weight) {
        if (play.grade < 0) return;
        revenue += weight * play.paid;
        revenue_sq += weight * play.paid * play.paid;
        sale += weight;
        shares[play.grade] += weight;
    }

    void merge(const Accumulator& o) {
        revenue += o.revenue;
        revenue_sq += o.revenue_sq;
        sale += o.sale;
        for (std::size_t j = 0; j < shares.size(); ++j) shares[j] += o.shares[j];
    }
};

void validate_menu(const AuctionSetting& setting, const PriceMenu& menu) {
    validate_setting(setting);
    if (static_cast<int>(menu.prices.size()) != setting.qualities()) {
        throw std::invalid_argument("menu must carry one price per grade");
    }
    for (double p : menu.prices) {
        if (!std::isfinite(p)) throw std::invalid_argument("menu prices must be finite");
    }
}

}  // namespace

EbmOutcome ebm_revenue_exact(const AuctionSetting& setting, const PriceMenu& menu,
                             bool parallel) {
    validate_menu(setting, menu);
    const TypeGrid& grid = *setting.grid;
    const int n = grid.size();
    const int buyers = setting.buyers;
    const int qualities = setting.qualities();

    double tuples_d = 1.0;
    for (int i = 0; i < buyers; ++i) tuples_d *= n;
    if (tuples_d > kEbmEnumerationGuard) {
        throw std::invalid_argument("type-tuple enumeration exceeds the size guard");
    }
    const long tuples = static_cast<long>(tuples_d);

    constexpr long kChunk = 4096;
    const long chunks = (tuples + kChunk - 1) / kChunk;
    std::vector<Accumulator> partial(chunks, Accumulator(qualities));

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long c = 0; c < chunks; ++c) {
        Accumulator& acc = partial[c];
        std::vector<double> types(static_cast<std::size_t>(buyers) * qualities);
        std::vector<int> idx(buyers);
        for (long t = c * kChunk; t < std::min(tuples, (c + 1) * kChunk); ++t) {
            long rem = t;
            double weight = 1.0;
            for (int i = buyers - 1; i >= 0; --i) {
                idx[i] = static_cast<int>(rem % n);
                rem /= n;
                weight *= setting.density[idx[i]];
            }
            if (weight == 0.0) continue;
            for (int i = 0; i < buyers; ++i) {
                for (int j = 0; j < qualities; ++j) {
                    types[i * qualities + j] = grid.coord(idx[i], j);
                }
            }
            acc.add(play_game(types.data(), buyers, qualities, menu.prices), weight);
        }
    }

    Accumulator total(qualities);
    for (const Accumulator& acc : partial) total.merge(acc);

    EbmOutcome out;
    out.revenue = total.revenue;
    out.sale_probability = total.sale;
    out.grade_shares = total.shares;
    return out;
}

EbmOutcome ebm_revenue_mc(const AuctionSetting& setting, const PriceMenu& menu, long samples,
                          std::uint64_t seed, bool parallel) {
    validate_menu(setting, menu);
    if (samples < 1) throw std::invalid_argument("sample count must be >= 1");
    const TypeGrid& grid = *setting.grid;
    const int n = grid.size();
    const int buyers = setting.buyers;
    const int qualities = setting.qualities();

    std::vector<double> cdf(n);
    double run = 0.0;
    for (int v = 0; v < n; ++v) {
        run += setting.density[v];
        cdf[v] = run;
    }
    cdf[n - 1] = 1.0;

    constexpr long kChunk = 8192;
    const long chunks = (samples + kChunk - 1) / kChunk;
    std::vector<Accumulator> partial(chunks, Accumulator(qualities));

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long c = 0; c < chunks; ++c) {
        Accumulator& acc = partial[c];
        // Chunk-local stream: deterministic for any thread count.
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(c + 1));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::vector<double> types(static_cast<std::size_t>(buyers) * qualities);
        const long lo = c * kChunk;
        const long hi = std::min(samples, lo + kChunk);
        for (long t = lo; t < hi; ++t) {
            for (int i = 0; i < buyers; ++i) {
                const auto it = std::upper_bound(cdf.begin(), cdf.end(), uni(rng));
                const int v = static_cast<int>(std::min<std::ptrdiff_t>(
                    it - cdf.begin(), n - 1));
                for (int j = 0; j < qualities; ++j) {
                    types[i * qualities + j] = grid.coord(v, j);
                }
            }
            acc.add(play_game(types.data(), buyers, qualities, menu.prices), 1.0);
        }
    }

    Accumulator total(qualities);
    for (const Accumulator& acc : partial) total.merge(acc);

    EbmOutcome out;
    const double inv = 1.0 / static_cast<double>(samples);
    out.revenue = total.revenue * inv;
    out.sale_probability = total.sale * inv;
    out.grade_shares = total.shares;
    for (double& s : out.grade_shares) s *= inv;
    const double var = std::max(0.0, total.revenue_sq * inv - out.revenue * out.revenue);
    out.std_error = std::sqrt(var * inv);
    out.samples = samples;
    return out;
}

EbmSearchResult optimize_ebm(const AuctionSetting& setting, int resolution, long mc_samples,
                             std::uint64_t seed) {
    validate_setting(setting);
    if (resolution < 1) throw std::invalid_argument("price resolution must be >= 1");
    const TypeGrid& grid = *setting.grid;
    const Box& box = grid.box();
    const int qualities = setting.qualities();

    double tuples = 1.0;
    for (int i = 0; i < setting.buyers; ++i) tuples *= grid.size();
    const bool exact = tuples <= kEbmEnumerationGuard;

    // Candidate prices per grade: the affine grid plus a withdraw sentinel.
    std::vector<std::vector<double>> levels(qualities);
    for (int j = 0; j < qualities; ++j) {
        const double step = box.range(j) / resolution;
        for (int k = 0; k <= resolution; ++k) levels[j].push_back(box.lower[j] + k * step);
        levels[j].push_back(box.upper[j] + 1.0);
    }
    long menus = 1;
    for (int j = 0; j < qualities; ++j) menus *= static_cast<long>(levels[j].size());

    auto menu_at = [&](long index) {
        PriceMenu menu;
        menu.prices.resize(qualities);
        for (int j = qualities - 1; j >= 0; --j) {
            const long w = static_cast<long>(levels[j].size());
            menu.prices[j] = levels[j][index % w];
            index /= w;
        }
        return menu;
    };

    // Chunked scan with an ordered reduction: the winner is identical to the
    // serial lexicographic scan.
    constexpr long kChunk = 8;
    const long chunks = (menus + kChunk - 1) / kChunk;
    std::vector<std::pair<double, long>> best_per_chunk(
        chunks, {-std::numeric_limits<double>::infinity(), -1});

#pragma omp parallel for schedule(dynamic)
    for (long c = 0; c < chunks; ++c) {
        const long lo = c * kChunk;
        const long hi = std::min(menus, lo + kChunk);
        for (long idx = lo; idx < hi; ++idx) {
            const PriceMenu menu = menu_at(idx);
            const double rev = exact ? ebm_revenue_exact(setting, menu, false).revenue
                                     : ebm_revenue_mc(setting, menu, mc_samples, seed, false).revenue;
            if (rev > best_per_chunk[c].first) best_per_chunk[c] = {rev, idx};
        }
    }

    double best_rev = -std::numeric_limits<double>::infinity();
    long best_idx = -1;
    for (const auto& [rev, idx] : best_per_chunk) {
        if (idx >= 0 && rev > best_rev) {
            best_rev = rev;
            best_idx = idx;
        }
    }

    EbmSearchResult result;
    result.menu = menu_at(best_idx);
    result.outcome = exact ? ebm_revenue_exact(setting, result.menu)
                           : ebm_revenue_mc(setting, result.menu, mc_samples, seed);
    return result;
}

double myerson_oracle(int buyers, const DistributionSpec& dist, const Box& box, double cost) {
    if (buyers < 1) throw std::invalid_argument("buyer count must be >= 1");
    if (box.dim() != 1) throw std::invalid_argument("the oracle handles one dimension only");
    validate_box(box);
    if (cost < 0.0) throw std::invalid_argument("cost must be nonnegative");

    constexpr int kPoints = 20001;
    const double a = box.lower[0];
    const double b = box.upper[0];
    const double h = (b - a) / (kPoints - 1);

    std::vector<double> pdf(kPoints);
    for (int i = 0; i < kPoints; ++i) {
        const double x = a + i * h;
        pdf[i] = eval_density(dist, std::span<const double>(&x, 1), box);
        if (!std::isfinite(pdf[i])) {
            throw std::domain_error("density is unbounded on the support");
        }
    }
    double z = 0.0;
    for (int i = 0; i + 1 < kPoints; ++i) z += 0.5 * (pdf[i] + pdf[i + 1]) * h;
    if (z <= 0.0) throw std::domain_error("density integrates to zero");
    for (double& f : pdf) f /= z;

    std::vector<double> cdf(kPoints, 0.0);
    for (int i = 1; i < kPoints; ++i) {
        cdf[i] = cdf[i - 1] + 0.5 * (pdf[i - 1] + pdf[i]) * h;
    }
    cdf[kPoints - 1] = 1.0;

    std::vector<double> psi(kPoints);
    for (int i = 0; i < kPoints; ++i) {
        if (pdf[i] <= 1e-12) {
            // Endpoint densities may vanish; psi(b) tends to b there.
            if (i == kPoints - 1) {
                psi[i] = b;
                continue;
            }
            throw std::domain_error("the oracle needs a strictly positive density");
        }
        psi[i] = (a + i * h) - (1.0 - cdf[i]) / pdf[i];
    }
    for (int i = 1; i < kPoints; ++i) {
        if (psi[i] < psi[i - 1] - 1e-6 * (1.0 + std::abs(psi[i - 1]))) {
            throw std::domain_error("virtual value is not monotone (irregular distribution)");
        }
    }

    // Reserve: first point where the virtual value covers the cost.
    int reserve = kPoints;
    for (int i = 0; i < kPoints; ++i) {
        if (psi[i] >= cost) {
            reserve = i;
            break;
        }
    }
    if (reserve == kPoints) return 0.0;

    // Expected profit: N * integral over [r, b] of (psi - c) F^(N-1) f.
    auto integrand = [&](int i) {
        return (psi[i] - cost) * std::pow(cdf[i], buyers - 1) * pdf[i];
    };
    double total = 0.0;
    for (int i = reserve; i + 1 < kPoints; ++i) {
        total += 0.5 * (integrand(i) + integrand(i + 1)) * h;
    }
    return buyers * total;
}

}  // namespace mdauct
