#include "mdauct/distribution.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mdauct {

namespace {

void validate_node(const DistributionSpec::Node& node) {
    if (const auto* b = std::get_if<BetaSpec>(&node)) {
        if (!(b->a > 0.0) || !(b->b > 0.0)) {
            throw std::invalid_argument("beta parameters must be positive");
        }
    } else if (const auto* tn = std::get_if<TruncNormalSpec>(&node)) {
        if (tn->mean.size() != tn->stddev.size()) {
            throw std::invalid_argument("truncnormal mean/stddev length mismatch");
        }
        for (double s : tn->stddev) {
            if (!(s > 0.0)) throw std::invalid_argument("truncnormal stddev must be positive");
        }
    } else if (const auto* mx = std::get_if<MixtureSpec>(&node)) {
        if (!(mx->alpha >= 0.0 && mx->alpha <= 1.0)) {
            throw std::invalid_argument("mixture weight must be in [0, 1]");
        }
        if (!mx->first || !mx->second) {
            throw std::invalid_argument("mixture components must be set");
        }
    } else if (const auto* p = std::get_if<ProductSpec>(&node)) {
        if (p->dims.empty()) throw std::invalid_argument("product needs at least one dimension");
        for (const auto& d : p->dims) {
            if (!d) throw std::invalid_argument("product component must be set");
        }
    } else if (const auto* t = std::get_if<TableSpec>(&node)) {
        bool any = false;
        for (double v : t->values) {
            if (v < 0.0) throw std::invalid_argument("table density values must be nonnegative");
            if (v > 0.0) any = true;
        }
        if (!any) throw std::invalid_argument("table density must not be all zero");
    }
}

double beta_pdf01(double x, double a, double b) {
    // Unit-interval beta pdf via lgamma; endpoints evaluated by limit where
    // the exponent vanishes.
    if (x < 0.0 || x > 1.0) return 0.0;
    const double logc = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    double logx = 0.0;
    if (a != 1.0) {
        if (x == 0.0) return a > 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
        logx += (a - 1.0) * std::log(x);
    }
    if (b != 1.0) {
        if (x == 1.0) return b > 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
        logx += (b - 1.0) * std::log1p(-x);
    }
    return std::exp(logc + logx);
}

double normal_pdf(double x, double mean, double sd) {
    const double z = (x - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
}

}  // namespace

DistributionSpec::DistributionSpec(Node node) : node_(std::move(node)) {
    validate_node(node_);
}

DistributionSpec DistributionSpec::uniform() { return DistributionSpec(UniformSpec{}); }

DistributionSpec DistributionSpec::beta(double a, double b) {
    return DistributionSpec(BetaSpec{a, b});
}

DistributionSpec DistributionSpec::trunc_normal(std::vector<double> mean,
                                                std::vector<double> stddev) {
    return DistributionSpec(TruncNormalSpec{std::move(mean), std::move(stddev)});
}

DistributionSpec DistributionSpec::product(std::vector<DistributionSpec> dims) {
    ProductSpec p;
    p.dims.reserve(dims.size());
    for (auto& d : dims) {
        p.dims.push_back(std::make_shared<const DistributionSpec>(std::move(d)));
    }
    return DistributionSpec(std::move(p));
}

DistributionSpec DistributionSpec::mixture(double alpha, DistributionSpec first,
                                           DistributionSpec second) {
    MixtureSpec m;
    m.alpha = alpha;
    m.first = std::make_shared<const DistributionSpec>(std::move(first));
    m.second = std::make_shared<const DistributionSpec>(std::move(second));
    return DistributionSpec(std::move(m));
}

DistributionSpec DistributionSpec::table(std::vector<double> values) {
    return DistributionSpec(TableSpec{std::move(values)});
}

double eval_density(const DistributionSpec& spec, std::span<const double> point, const Box& box) {
    const int dim = box.dim();
    if (static_cast<int>(point.size()) != dim) {
        throw std::invalid_argument("point has wrong dimension");
    }
    for (int j = 0; j < dim; ++j) {
        if (point[j] < box.lower[j] - 1e-12 || point[j] > box.upper[j] + 1e-12) {
            throw std::invalid_argument("point lies outside the box");
        }
    }

    struct Visitor {
        std::span<const double> pt;
        const Box& box;

        double operator()(const UniformSpec&) const { return 1.0; }
        double operator()(const BetaSpec& b) const {
            double v = 1.0;
            for (int j = 0; j < box.dim(); ++j) {
                const double x = (pt[j] - box.lower[j]) / box.range(j);
                v *= beta_pdf01(x, b.a, b.b);
            }
            return v;
        }
        double operator()(const TruncNormalSpec& tn) const {
            double v = 1.0;
            for (int j = 0; j < box.dim(); ++j) {
                v *= normal_pdf(pt[j], tn.mean[j], tn.stddev[j]);
            }
            return v;
        }
        double operator()(const ProductSpec& p) const {
            if (static_cast<int>(p.dims.size()) != box.dim()) {
                throw std::invalid_argument("product spec dimension mismatch");
            }
            double v = 1.0;
            for (int j = 0; j < box.dim(); ++j) {
                Box sub{{box.lower[j]}, {box.upper[j]}};
                const double x = pt[j];
                v *= eval_density(*p.dims[j], std::span<const double>(&x, 1), sub);
            }
            return v;
        }
        double operator()(const MixtureSpec& m) const {
            return m.alpha * eval_density(*m.first, pt, box) +
                   (1.0 - m.alpha) * eval_density(*m.second, pt, box);
        }
        double operator()(const TableSpec&) const {
            throw std::invalid_argument("table densities are evaluated against a grid");
        }
    };
    return std::visit(Visitor{point, box}, spec.node());
}

DiscreteDensity discretize_density(const DistributionSpec& spec,
                                   std::shared_ptr<const TypeGrid> grid) {
    const int n = grid->size();
    std::vector<double> mass(n);

    if (const auto* t = std::get_if<TableSpec>(&spec.node())) {
        if (static_cast<int>(t->values.size()) != n) {
            throw std::invalid_argument("table density has " +
                                        std::to_string(t->values.size()) + " values, grid has " +
                                        std::to_string(n) + " points");
        }
        mass = t->values;
    } else {
        for (int i = 0; i < n; ++i) {
            mass[i] = eval_density(spec, grid->point(i), grid->box());
        }
    }

    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(mass[i]) || mass[i] < 0.0) {
            throw std::domain_error("density is not finite and nonnegative at grid point " +
                                    std::to_string(i));
        }
        total += mass[i];
    }
    if (total <= 0.0) {
        throw std::domain_error("density evaluates to zero at every grid point");
    }
    for (double& m : mass) m /= total;
    return DiscreteDensity{std::move(grid), std::move(mass)};
}

}  // namespace mdauct
