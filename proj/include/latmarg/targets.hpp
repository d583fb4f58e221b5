#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latmarg/pointset.hpp"

namespace latmarg {

// Per-axis variance-stabilizing transform h(theta) = theta_z.
// Identity: theta_z = theta. Log: theta_z = log(theta), theta > 0.
enum class Reparam { Identity, Log };

// Closed-form normalized marginal density on the theta_z (working) scale,
// used as an oracle. center/spread define the interval the density lives on
// (checked to integrate to 1 over center +- 12*spread at construction).
struct AnalyticMarginal {
    std::function<double(double)> density;
    double center = 0.0;
    double spread = 1.0;
};

// Evaluatable log-density on the theta_z working scale. Must be pure and
// reentrant; returns -inf outside its support.
struct TargetDensity {
    int dim = 0;
    std::string label;
    std::function<double(std::span<const double>)> log_density;
    std::vector<Reparam> reparam;                                  // per axis
    std::vector<std::optional<AnalyticMarginal>> analytic_marginal;  // per axis

    double operator()(std::span<const double> x) const { return log_density(x); }
};

// Multivariate normal target; analytic marginals N(mean_k, cov_kk).
TargetDensity make_gaussian(const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance);

// Independent product of log-Gamma axes: theta_z,k = log tau_k with
// tau_k ~ Gamma(shape_k, 1). Reparam = Log, so the theta-scale marginal is Gamma.
TargetDensity make_skewed(int dim, std::span<const double> shapes);

// Standard normal on every axis except `axis` (0-based), which is the mixture
// weight*N(-separation/2, 1) + (1-weight)*N(+separation/2, 1).
TargetDensity make_bimodal(int dim, int axis, double separation, double weight);

// Parses CLI target labels, e.g. "gaussian:dim=5", "skewed:shapes=1,2,3",
// "bimodal:dim=5,axis=2,sep=6,w=0.5" (axis is 1-based in the label).
TargetDensity parse_target(const std::string& spec);

struct ModeSummary {
    Eigen::VectorXd mode;      // argmax of log density
    Eigen::MatrixXd hessian;   // of -log density at mode, regularized to SPD
    Eigen::VectorXd std_devs;  // sqrt(diag(hessian^-1))
};

// Nelder-Mead ascent of the log density followed by a central finite-difference
// Hessian. Throws ConvergenceError after 1e5 iterations or if the Hessian
// cannot be regularized to SPD.
ModeSummary find_mode_hessian(const TargetDensity& t, std::span<const double> start);

// [mode_k - c*sd_k, mode_k + c*sd_k) per axis.
IntegrationRegion build_region(const ModeSummary& ms, double c = 3.0);

}  // namespace latmarg
