#pragma once

#include <vector>

#include "latmarg/marginal.hpp"
#include "latmarg/pointset.hpp"
#include "latmarg/projection.hpp"
#include "latmarg/targets.hpp"

namespace latmarg {

// Least-squares quadratic through the log partition means, solved in the
// centered-scaled variable by an orthogonal decomposition (never normal
// equations). Needs >= 3 usable partitions.
LogPolyApprox fit_quadratic_log(const PartitionSummary& psum, double a_k, double b_k);
LogPolyApprox fit_quadratic_log(const PartitionSummary& psum);  // span from edges

// Residual correction: r_u = log_mean_u - q(midpoint_u) (data minus fit);
// a degree-x least-squares polynomial through the residuals is added to q.
// Needs >= x+1 usable partitions.
LogPolyApprox correct_polynomial(const LogPolyApprox& q, const PartitionSummary& psum, int x);

// --- full pipelines; all marginals are returned on the theta_z scale. ---
// inverse_transform_marginal converts per the target's reparameterization.

// Grid method: pointwise means per abscissa, natural cubic spline in density
// scale, clamped at zero, normalized. Needs n >= 4 knots.
std::vector<MarginalApprox> marginalize_grid(const TargetDensity& t, const IntegrationRegion& region,
                                             int n, std::int64_t budget = kDefaultPointBudget);

// Standard LDS method: one least-squares polynomial (default degree 8) through
// all projected evaluations in density scale; negative values clamp to zero
// and set the Runge warning flag.
std::vector<MarginalApprox> marginalize_lds_stm(const TargetDensity& t, const PointSet& scaled,
                                                int degree = 8);

// Quadratic approximation: partition pointwise means, quadratic fit in log
// scale, normalization.
std::vector<MarginalApprox> marginalize_lds_qa(const TargetDensity& t, const PointSet& scaled, int n);

// Quadratic plus degree-x residual correction.
std::vector<MarginalApprox> marginalize_lds_cx(const TargetDensity& t, const PointSet& scaled,
                                               int n, int x);

// Cloud-level entry points so one evaluation pass can feed several methods.
std::vector<MarginalApprox> qa_from_cloud(const EvaluationCloud& cloud, int n);
std::vector<MarginalApprox> cx_from_cloud(const EvaluationCloud& cloud, int n, int x);
std::vector<MarginalApprox> stm_from_cloud(const EvaluationCloud& cloud, int degree);
std::vector<MarginalApprox> grid_from_cloud(const EvaluationCloud& cloud);

}  // namespace latmarg
