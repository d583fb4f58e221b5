#include "latmarg/baselines.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "latmarg/errors.hpp"

namespace latmarg {

std::vector<MarginalApprox> half_gaussian_baseline(const TargetDensity& t, const ModeSummary& ms,
                                                   const IntegrationRegion* support) {
    if (static_cast<int>(ms.mode.size()) != t.dim)
        throw std::invalid_argument("half_gaussian_baseline: mode dimension mismatch");
    if (support && support->dim() != t.dim)
        throw std::invalid_argument("half_gaussian_baseline: support dimension mismatch");

    std::vector<double> slice(ms.mode.data(), ms.mode.data() + ms.mode.size());
    const double log_at_mode = t.log_density(slice);
    if (!std::isfinite(log_at_mode))
        throw std::invalid_argument("half_gaussian_baseline: log density not finite at mode");

    std::vector<MarginalApprox> out;
    out.reserve(t.dim);
    for (int k = 0; k < t.dim; ++k) {
        const double mu = ms.mode(k);
        const double sd = ms.std_devs(k);
        double sigma[2];  // 0: minus side, 1: plus side
        for (int side = 0; side < 2; ++side) {
            const double sign = side == 0 ? -1.0 : 1.0;
            // fit -(d^2)/(2 sigma^2) through the slice drops at two displacements
            double num = 0.0, den = 0.0;
            for (int j = 1; j <= 2; ++j) {
                double d = sign * j * sd / 2.0;
                slice[k] = mu + d;
                double g = t.log_density(slice) - log_at_mode;
                if (!std::isfinite(g))
                    throw std::invalid_argument(
                        "half_gaussian_baseline: non-finite slice evaluation on axis " +
                        std::to_string(k));
                num += -g * d * d;
                den += d * d * d * d;
            }
            slice[k] = mu;
            double beta = num / den;  // 1/(2 sigma^2)
            if (!(beta > 0.0))
                throw FitError("half_gaussian_baseline: slice not concave on axis " +
                               std::to_string(k));
            sigma[side] = std::sqrt(0.5 / beta);
        }

        HalfGaussianShape shape{mu, sigma[0], sigma[1]};
        double lo = support ? support->lower[k] : mu - 8.0 * sigma[0];
        double hi = support ? support->upper[k] : mu + 8.0 * sigma[1];
        MarginalApprox m = normalize_shape(shape, lo, hi, MethodTag::HalfGaussian, k);
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<MarginalApprox> dense_grid_oracle(const TargetDensity& t, const IntegrationRegion& region,
                                              int n_dense, std::int64_t budget) {
    std::vector<MarginalApprox> out = marginalize_grid(t, region, n_dense, budget);
    for (auto& m : out) m.method = MethodTag::Oracle;
    return out;
}

std::vector<MarginalApprox> oracle_marginals(const TargetDensity& t, const IntegrationRegion& region,
                                             int n_dense_fallback) {
    if (region.dim() != t.dim) throw std::invalid_argument("oracle_marginals: dimension mismatch");
    bool all_analytic = true;
    for (int k = 0; k < t.dim; ++k) all_analytic = all_analytic && t.analytic_marginal[k].has_value();

    std::vector<MarginalApprox> grid_oracle;
    if (!all_analytic) grid_oracle = dense_grid_oracle(t, region, n_dense_fallback);

    std::vector<MarginalApprox> out;
    out.reserve(t.dim);
    for (int k = 0; k < t.dim; ++k) {
        if (t.analytic_marginal[k]) {
            AnalyticShape shape{t.analytic_marginal[k]->density};
            out.push_back(normalize_shape(std::move(shape), region.lower[k], region.upper[k],
                                          MethodTag::Oracle, k));
        } else {
            out.push_back(grid_oracle[k]);
        }
    }
    return out;
}

}  // namespace latmarg
