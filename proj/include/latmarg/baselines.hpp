#pragma once

#include <vector>

#include "latmarg/marginal.hpp"
#include "latmarg/marginalize.hpp"

namespace latmarg {

// Half-Gaussian baseline: per axis, a density exp(-(x-mu_k)^2 / (2 sigma^2))
// with a separate sigma on each side of the mode. Sigmas come from
// least-squares fits to conditional slices at displacements +-{1,2}*sd_k/2.
// Support defaults to mu_k +- 8*sigma unless a region is given.
std::vector<MarginalApprox> half_gaussian_baseline(const TargetDensity& t, const ModeSummary& ms,
                                                   const IntegrationRegion* support = nullptr);

// Fine grid-method marginals used as ground truth, tagged Oracle.
std::vector<MarginalApprox> dense_grid_oracle(const TargetDensity& t, const IntegrationRegion& region,
                                              int n_dense, std::int64_t budget = kDefaultPointBudget);

// Preferred oracle per axis: the analytic marginal (renormalized over the
// region) when the target carries one, otherwise the dense-grid marginal.
std::vector<MarginalApprox> oracle_marginals(const TargetDensity& t, const IntegrationRegion& region,
                                             int n_dense_fallback = 41);

}  // namespace latmarg
