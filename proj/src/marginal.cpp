#include "latmarg/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "latmarg/errors.hpp"

namespace latmarg {

std::string to_string(MethodTag tag) {
    switch (tag) {
        case MethodTag::Grid: return "grid";
        case MethodTag::StM: return "stm";
        case MethodTag::QA: return "qa";
        case MethodTag::CX: return "cx";
        case MethodTag::HalfGaussian: return "half-gaussian";
        case MethodTag::Oracle: return "oracle";
    }
    return "?";
}

namespace {

struct ShapeEval {
    double operator()(const LogPolyShape& s) const { return std::exp(s.poly(z) - s.log_offset); }
    double operator()(const DensityPolyShape& s) const {
        return std::max(polyval_scaled(s.coeffs, z, s.lo, s.hi), 0.0);
    }
    double operator()(const SplineShape& s) const { return std::max(s.spline(z), 0.0); }
    double operator()(const HalfGaussianShape& s) const {
        double d = z - s.mu;
        double sig = d > 0.0 ? s.sigma_plus : s.sigma_minus;
        double u = d / sig;
        return std::exp(-0.5 * u * u);
    }
    double operator()(const TabulatedShape& s) const { return std::max(s.spline(z), 0.0); }
    double operator()(const AnalyticShape& s) const { return s.density(z); }
    double z;
};

// raw shape value before clamping, to detect negative fits
struct RawShapeEval {
    double operator()(const DensityPolyShape& s) const {
        return polyval_scaled(s.coeffs, z, s.lo, s.hi);
    }
    double operator()(const SplineShape& s) const { return s.spline(z); }
    template <class Other>
    double operator()(const Other& s) const { return ShapeEval{z}(s); }
    double z;
};

}  // namespace

double MarginalApprox::unnormalized(double z) const {
    return std::visit(ShapeEval{z}, shape);
}

double MarginalApprox::density(double x) const {
    if (log_reparam) {
        if (!(x > 0.0)) return 0.0;
        double z = std::log(x);
        return unnormalized(z) / (normalizer * x);
    }
    return unnormalized(x) / normalizer;
}

MarginalApprox normalize_shape(MarginalShape shape, double lo, double hi, MethodTag tag,
                               int axis, int correction_degree) {
    if (!(lo < hi)) throw std::invalid_argument("normalize_shape: empty support");
    MarginalApprox m;
    m.axis = axis;
    m.method = tag;
    m.correction_degree = correction_degree;
    m.lo = m.shape_lo = lo;
    m.hi = m.shape_hi = hi;
    m.shape = std::move(shape);

    const int nodes = kNormalizationNodes;
    const double h = (hi - lo) / (nodes - 1);
    for (int i = 0; i < nodes; ++i) {
        double raw = std::visit(RawShapeEval{lo + h * i}, m.shape);
        if (raw < 0.0) ++m.clamped_nodes;
    }
    m.runge_flag = m.clamped_nodes > 0;

    double z = simpson([&m](double x) { return m.unnormalized(x); }, lo, hi, nodes);
    if (!(z > 0.0) || !std::isfinite(z))
        throw FitError("normalize_shape: normalizer underflowed or is not finite");
    m.normalizer = z;
    return m;
}

MarginalApprox normalize_log_poly(const LogPolyApprox& p, MethodTag tag, int correction_degree) {
    const int nodes = kNormalizationNodes;
    const double h = (p.hi - p.lo) / (nodes - 1);
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < nodes; ++i) m = std::max(m, p(p.lo + h * i));
    if (!std::isfinite(m)) throw FitError("normalize_log_poly: fit is not finite on support");
    return normalize_shape(LogPolyShape{p, m}, p.lo, p.hi, tag, p.axis, correction_degree);
}

MarginalApprox inverse_transform_marginal(const MarginalApprox& m, Reparam r) {
    if (m.scale != DensityScale::ThetaZ)
        throw std::invalid_argument("inverse_transform_marginal: input must be theta_z scale");
    if (r == Reparam::Identity) {
        MarginalApprox out = m;
        out.scale = DensityScale::Theta;
        return out;
    }
    MarginalApprox out = m;
    out.scale = DensityScale::Theta;
    out.log_reparam = true;
    out.lo = std::exp(m.shape_lo);
    out.hi = std::exp(m.shape_hi);
    // renormalize under the project quadrature convention in the new scale
    // (the analytic change-of-variables integral is 1; this pins the discrete
    // 1001-node check to 1 exactly as well)
    double z = simpson([&out](double tau) { return out.unnormalized(std::log(tau)) / tau; },
                       out.lo, out.hi, kNormalizationNodes);
    if (!(z > 0.0) || !std::isfinite(z))
        throw FitError("inverse_transform_marginal: normalizer underflowed or is not finite");
    out.normalizer = z;
    return out;
}

double integrate_density(const MarginalApprox& m, int nodes) {
    return simpson([&m](double x) { return m.density(x); }, m.lo, m.hi, nodes);
}

std::vector<double> local_maxima(const MarginalApprox& m, int nodes) {
    const double h = (m.hi - m.lo) / (nodes - 1);
    std::vector<double> d(nodes);
    for (int i = 0; i < nodes; ++i) d[i] = m.density(m.lo + h * i);
    std::vector<double> locs;
    // rising -> falling transitions; a plateau counts once, at its right edge
    int rise_start = -1;
    for (int i = 1; i < nodes; ++i) {
        if (d[i] > d[i - 1]) {
            rise_start = i;
        } else if (d[i] < d[i - 1]) {
            if (rise_start >= 0) locs.push_back(m.lo + h * (i - 1));
            rise_start = -1;
        }
    }
    return locs;
}

}  // namespace latmarg
