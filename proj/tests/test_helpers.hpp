#pragma once

#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "latmarg/marginal.hpp"

namespace latmarg::testing {

inline void check_normalized(const MarginalApprox& m, double tol = 1e-6) {
    CHECK(std::abs(integrate_density(m) - 1.0) <= tol);
}

inline double normal_pdf(double x, double mu = 0.0, double sigma = 1.0) {
    double z = (x - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Normalized analytic density wrapped as a marginal on [lo, hi].
inline MarginalApprox analytic_marginal_on(std::function<double(double)> pdf, double lo, double hi,
                                           int axis = 0) {
    return normalize_shape(AnalyticShape{std::move(pdf)}, lo, hi, MethodTag::Oracle, axis);
}

// Simpson integral of an arbitrary integrand (test-side quadrature oracle).
inline double quad(const std::function<double(double)>& f, double lo, double hi, int nodes = 4001) {
    return simpson(f, lo, hi, nodes);
}

}  // namespace latmarg::testing
