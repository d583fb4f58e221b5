#pragma once

#include "latmarg/marginal.hpp"

namespace latmarg {

struct DistanceReport {
    int axis = 0;
    double kl = 0.0;        // +inf when q vanishes where p does not
    double hellinger = 0.0;
    int grid_points = 0;
    double lo = 0.0, hi = 0.0;  // evaluation interval (support intersection)
};

// Both densities are evaluated on m equally spaced nodes over the
// intersection of their supports and renormalized discretely (sum * h = 1)
// before comparison. Throws on disjoint supports.
double kl_divergence(const MarginalApprox& p, const MarginalApprox& q, int m = 1001);
double hellinger(const MarginalApprox& p, const MarginalApprox& q, int m = 1001);
DistanceReport compare_marginals(const MarginalApprox& p, const MarginalApprox& q, int m = 1001);

}  // namespace latmarg
