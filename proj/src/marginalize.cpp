#include "latmarg/marginalize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "latmarg/errors.hpp"
#include "latmarg/numeric.hpp"

namespace latmarg {

namespace {

// usable (midpoint, log mean) pairs for fitting
void gather_usable(const PartitionSummary& psum, std::vector<double>& xs, std::vector<double>& ys) {
    xs.clear();
    ys.clear();
    for (int u = 0; u < psum.size(); ++u) {
        if (!psum.usable(u)) continue;
        xs.push_back(psum.midpoints[u]);
        ys.push_back(psum.log_means[u]);
    }
}

}  // namespace

LogPolyApprox fit_quadratic_log(const PartitionSummary& psum, double a_k, double b_k) {
    std::vector<double> xs, ys;
    gather_usable(psum, xs, ys);
    if (xs.size() < 3)
        throw FitError("fit_quadratic_log: need at least 3 usable partitions, have " +
                       std::to_string(xs.size()));
    LogPolyApprox p;
    p.axis = psum.axis;
    p.lo = a_k;
    p.hi = b_k;
    p.coeffs = polyfit_scaled(xs, ys, 2, a_k, b_k);
    return p;
}

LogPolyApprox fit_quadratic_log(const PartitionSummary& psum) {
    return fit_quadratic_log(psum, psum.edges.front(), psum.edges.back());
}

LogPolyApprox correct_polynomial(const LogPolyApprox& q, const PartitionSummary& psum, int x) {
    if (x < 3) throw std::invalid_argument("correct_polynomial: correction degree must be >= 3");
    std::vector<double> xs, ys;
    gather_usable(psum, xs, ys);
    if (static_cast<int>(xs.size()) < x + 1)
        throw FitError("correct_polynomial: need at least " + std::to_string(x + 1) +
                       " usable partitions for degree " + std::to_string(x));
    std::vector<double> residuals(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) residuals[i] = ys[i] - q(xs[i]);

    std::vector<double> corr = polyfit_scaled(xs, residuals, x, q.lo, q.hi);
    LogPolyApprox out = q;
    out.coeffs.resize(static_cast<std::size_t>(x) + 1, 0.0);
    for (std::size_t i = 0; i < corr.size(); ++i) out.coeffs[i] += corr[i];
    return out;
}

std::vector<MarginalApprox> qa_from_cloud(const EvaluationCloud& cloud, int n) {
    std::vector<MarginalApprox> out;
    out.reserve(cloud.points.dim);
    for (int k = 0; k < cloud.points.dim; ++k) {
        ProjectedAxis pa = project_axis(cloud, k);
        PartitionSummary psum =
            partition_means(pa, n, cloud.region.lower[k], cloud.region.upper[k]);
        LogPolyApprox q = fit_quadratic_log(psum, cloud.region.lower[k], cloud.region.upper[k]);
        out.push_back(normalize_log_poly(q, MethodTag::QA));
    }
    return out;
}

std::vector<MarginalApprox> cx_from_cloud(const EvaluationCloud& cloud, int n, int x) {
    std::vector<MarginalApprox> out;
    out.reserve(cloud.points.dim);
    for (int k = 0; k < cloud.points.dim; ++k) {
        ProjectedAxis pa = project_axis(cloud, k);
        PartitionSummary psum =
            partition_means(pa, n, cloud.region.lower[k], cloud.region.upper[k]);
        LogPolyApprox q = fit_quadratic_log(psum, cloud.region.lower[k], cloud.region.upper[k]);
        LogPolyApprox corrected = correct_polynomial(q, psum, x);
        out.push_back(normalize_log_poly(corrected, MethodTag::CX, x));
    }
    return out;
}

std::vector<MarginalApprox> stm_from_cloud(const EvaluationCloud& cloud, int degree) {
    if (degree < 2) throw std::invalid_argument("marginalize_lds_stm: degree must be >= 2");
    if (cloud.size() <= degree + 1)
        throw std::invalid_argument("marginalize_lds_stm: need more points than coefficients");

    // one shared gauge offset keeps axes comparable and exp in range
    double gauge = -std::numeric_limits<double>::infinity();
    for (double v : cloud.log_values) gauge = std::max(gauge, v);

    std::vector<MarginalApprox> out;
    out.reserve(cloud.points.dim);
    for (int k = 0; k < cloud.points.dim; ++k) {
        ProjectedAxis pa = project_axis(cloud, k);
        std::vector<double> dens(pa.log_values.size());
        for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = std::exp(pa.log_values[i] - gauge);

        const double lo = cloud.region.lower[k];
        const double hi = cloud.region.upper[k];
        DensityPolyShape shape;
        shape.lo = lo;
        shape.hi = hi;
        shape.coeffs = polyfit_scaled(pa.abscissae, dens, degree, lo, hi);
        out.push_back(normalize_shape(std::move(shape), lo, hi, MethodTag::StM, k));
    }
    return out;
}

std::vector<MarginalApprox> grid_from_cloud(const EvaluationCloud& cloud) {
    if (cloud.points.kind != PointSetKind::Grid)
        throw std::invalid_argument("marginalize_grid: cloud is not grid-born");
    if (cloud.points.n_per_axis < 4)
        throw std::invalid_argument("marginalize_grid: cubic spline needs n >= 4");

    std::vector<MarginalApprox> out;
    out.reserve(cloud.points.dim);
    for (int k = 0; k < cloud.points.dim; ++k) {
        PartitionSummary psum = grid_axis_means(cloud, k);
        double gauge = -std::numeric_limits<double>::infinity();
        for (double lm : psum.log_means) gauge = std::max(gauge, lm);
        if (!std::isfinite(gauge))
            throw FitError("marginalize_grid: all pointwise means are zero on axis " +
                           std::to_string(k));
        std::vector<double> ys(psum.midpoints.size());
        for (std::size_t i = 0; i < ys.size(); ++i) {
            double lm = psum.log_means[i];
            ys[i] = std::isfinite(lm) ? std::exp(lm - gauge) : 0.0;
        }
        SplineShape shape{CubicSpline(psum.midpoints, ys)};
        out.push_back(normalize_shape(std::move(shape), cloud.region.lower[k],
                                      cloud.region.upper[k], MethodTag::Grid, k));
    }
    return out;
}

std::vector<MarginalApprox> marginalize_grid(const TargetDensity& t, const IntegrationRegion& region,
                                             int n, std::int64_t budget) {
    PointSet grid = scale_to_region(generate_grid(n, t.dim, budget), region);
    return grid_from_cloud(evaluate_cloud(t, grid));
}

std::vector<MarginalApprox> marginalize_lds_stm(const TargetDensity& t, const PointSet& scaled,
                                                int degree) {
    return stm_from_cloud(evaluate_cloud(t, scaled), degree);
}

std::vector<MarginalApprox> marginalize_lds_qa(const TargetDensity& t, const PointSet& scaled, int n) {
    return qa_from_cloud(evaluate_cloud(t, scaled), n);
}

std::vector<MarginalApprox> marginalize_lds_cx(const TargetDensity& t, const PointSet& scaled,
                                               int n, int x) {
    return cx_from_cloud(evaluate_cloud(t, scaled), n, x);
}

}  // namespace latmarg
