#include "latmarg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "latmarg/numeric.hpp"

namespace latmarg {

namespace {

struct GridPair {
    std::vector<double> p, q;
    double h = 0.0;
    double lo = 0.0, hi = 0.0;
};

GridPair evaluate_pair(const MarginalApprox& p, const MarginalApprox& q, int m) {
    if (m < 2) throw std::invalid_argument("metrics: need at least 2 grid points");
    if (p.scale != q.scale) throw std::invalid_argument("metrics: scale mismatch");
    const double lo = std::max(p.lo, q.lo);
    const double hi = std::min(p.hi, q.hi);
    if (!(lo < hi)) throw std::invalid_argument("metrics: disjoint supports");

    GridPair g;
    g.lo = lo;
    g.hi = hi;
    g.h = (hi - lo) / (m - 1);
    g.p.resize(m);
    g.q.resize(m);
    KahanSum sp, sq;
    for (int i = 0; i < m; ++i) {
        double x = lo + g.h * i;
        g.p[i] = std::max(p.density(x), 0.0);
        g.q[i] = std::max(q.density(x), 0.0);
        sp.add(g.p[i]);
        sq.add(g.q[i]);
    }
    double zp = sp.value() * g.h;
    double zq = sq.value() * g.h;
    if (!(zp > 0.0) || !(zq > 0.0))
        throw std::invalid_argument("metrics: a density vanishes on the common support");
    for (int i = 0; i < m; ++i) {
        g.p[i] /= zp;
        g.q[i] /= zq;
    }
    return g;
}

double kl_on_grid(const GridPair& g) {
    KahanSum acc;
    for (std::size_t i = 0; i < g.p.size(); ++i) {
        if (g.p[i] == 0.0) continue;  // 0 log 0 = 0
        if (g.q[i] == 0.0) return std::numeric_limits<double>::infinity();
        acc.add(g.p[i] * std::log(g.p[i] / g.q[i]));
    }
    return acc.value() * g.h;
}

double hellinger_on_grid(const GridPair& g) {
    KahanSum acc;
    for (std::size_t i = 0; i < g.p.size(); ++i) acc.add(std::sqrt(g.p[i] * g.q[i]));
    double bc = std::min(acc.value() * g.h, 1.0);
    return std::sqrt(1.0 - bc);
}

}  // namespace

double kl_divergence(const MarginalApprox& p, const MarginalApprox& q, int m) {
    return kl_on_grid(evaluate_pair(p, q, m));
}

double hellinger(const MarginalApprox& p, const MarginalApprox& q, int m) {
    return hellinger_on_grid(evaluate_pair(p, q, m));
}

DistanceReport compare_marginals(const MarginalApprox& p, const MarginalApprox& q, int m) {
    GridPair g = evaluate_pair(p, q, m);
    DistanceReport r;
    r.axis = p.axis;
    r.kl = kl_on_grid(g);
    r.hellinger = hellinger_on_grid(g);
    r.grid_points = m;
    r.lo = g.lo;
    r.hi = g.hi;
    return r;
}

}  // namespace latmarg
