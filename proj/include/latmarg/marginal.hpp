#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "latmarg/numeric.hpp"
#include "latmarg/targets.hpp"

namespace latmarg {

// Polynomial in the log-density scale over [lo, hi], with coefficients in the
// centered-scaled variable t = (2x - (lo+hi)) / (hi - lo) in [-1, 1].
struct LogPolyApprox {
    int axis = 0;
    std::vector<double> coeffs;  // c0..cd, t basis
    double lo = 0.0, hi = 1.0;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    double operator()(double x) const { return polyval_scaled(coeffs, x, lo, hi); }
    // monomial coefficients of the unscaled variable (diagnostics)
    std::vector<double> monomial_coeffs() const { return poly_to_monomial(coeffs, lo, hi); }
};

enum class MethodTag { Grid, StM, QA, CX, HalfGaussian, Oracle };
enum class DensityScale { ThetaZ, Theta };

std::string to_string(MethodTag tag);

// --- shape payloads (unnormalized density over the theta_z support) ---

struct LogPolyShape {  // exp(p(x) - log_offset)
    LogPolyApprox poly;
    double log_offset = 0.0;
};

struct DensityPolyShape {  // max(poly(x), 0), density scale, t basis
    std::vector<double> coeffs;
    double lo = 0.0, hi = 1.0;
};

struct SplineShape {  // max(spline(x), 0), density scale
    CubicSpline spline;
};

struct HalfGaussianShape {  // exp(-(x-mu)^2 / (2 sigma_side^2)), side by sign of x-mu
    double mu = 0.0;
    double sigma_minus = 1.0;
    double sigma_plus = 1.0;
};

struct TabulatedShape {  // spline through stored samples (serialized closed forms)
    CubicSpline spline;
};

struct AnalyticShape {  // closed form; not serializable exactly (tabulated on write)
    std::function<double(double)> density;
};

using MarginalShape = std::variant<LogPolyShape, DensityPolyShape, SplineShape,
                                   HalfGaussianShape, TabulatedShape, AnalyticShape>;

// Normalized 1-D density: shape / normalizer on [shape_lo, shape_hi] in
// theta_z; when log_reparam is set the marginal lives on the exp-image and
// density(tau) = shape(log tau) / (normalizer * tau).
struct MarginalApprox {
    int axis = 0;
    DensityScale scale = DensityScale::ThetaZ;
    MethodTag method = MethodTag::QA;
    int correction_degree = 0;  // CX only
    double lo = 0.0, hi = 1.0;            // support in the current scale
    double shape_lo = 0.0, shape_hi = 1.0;  // theta_z support of the shape
    double normalizer = 1.0;              // Z divided out
    bool log_reparam = false;
    bool runge_flag = false;              // negative pre-clamp values were seen
    int clamped_nodes = 0;
    MarginalShape shape;

    double unnormalized(double z) const;  // shape scale, theta_z argument
    double density(double x) const;       // normalized, current scale
};

inline constexpr int kNormalizationNodes = 1001;

// density = exp(p - m)/Z with m the max of p on a 1001-node scan and Z the
// composite-Simpson integral of exp(p - m). Throws FitError when Z underflows.
MarginalApprox normalize_log_poly(const LogPolyApprox& p, MethodTag tag, int correction_degree = 0);

// Builds a normalized marginal from any shape: scans for clamped (negative)
// nodes and divides by the Simpson integral of the clamped shape.
MarginalApprox normalize_shape(MarginalShape shape, double lo, double hi, MethodTag tag,
                               int axis, int correction_degree = 0);

// Change of variables through the axis reparameterization. Identity returns
// the input; Log maps the support to [exp(lo), exp(hi)] with
// density_theta(tau) = density_z(log tau) / tau.
MarginalApprox inverse_transform_marginal(const MarginalApprox& m, Reparam r);

// Simpson integral of density() over the support (normalization check).
double integrate_density(const MarginalApprox& m, int nodes = kNormalizationNodes);

// Locations of strict interior local maxima of density() on a uniform scan.
std::vector<double> local_maxima(const MarginalApprox& m, int nodes = kNormalizationNodes);

}  // namespace latmarg
