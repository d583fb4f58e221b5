#include "latmarg/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "latmarg/errors.hpp"
#include "latmarg/numeric.hpp"

namespace latmarg {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

EvaluationCloud evaluate_cloud(const TargetDensity& t, const PointSet& ps) {
    if (t.dim != ps.dim) throw std::invalid_argument("evaluate_cloud: dimension mismatch");
    IntegrationRegion region = ps.region.has_value()
                                   ? *ps.region
                                   : IntegrationRegion(std::vector<double>(ps.dim, 0.0),
                                                       std::vector<double>(ps.dim, 1.0));
    std::vector<double> values(static_cast<std::size_t>(ps.n_points));
    parallel_for(values.size(), [&](std::size_t i) {
        values[i] = t.log_density(ps.point(static_cast<std::int64_t>(i)));
    });

    bool any_finite = false;
    for (double v : values) {
        if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
            throw std::invalid_argument("evaluate_cloud: log density must be finite or -inf");
        any_finite = any_finite || std::isfinite(v);
    }
    if (!any_finite) throw std::invalid_argument("evaluate_cloud: no finite log density value");
    return EvaluationCloud{ps, std::move(values), std::move(region)};
}

ProjectedAxis project_axis(const EvaluationCloud& cloud, int k) {
    if (k < 0 || k >= cloud.points.dim) throw std::invalid_argument("project_axis: axis out of range");
    ProjectedAxis pa;
    pa.axis = k;
    pa.abscissae.reserve(cloud.log_values.size());
    for (std::int64_t i = 0; i < cloud.size(); ++i) pa.abscissae.push_back(cloud.points.coord(i, k));
    pa.log_values = cloud.log_values;
    return pa;
}

Eigen::MatrixXd projection_matrix(int s, int k) {
    if (k < 0 || k >= s) throw std::invalid_argument("projection_matrix: axis out of range");
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(s + 1, 2);
    A(k, 0) = 1.0;
    A(s, 1) = 1.0;
    return A * (A.transpose() * A).inverse() * A.transpose();
}

Eigen::MatrixXd project_axis_dense(const EvaluationCloud& cloud, int k) {
    const int s = cloud.points.dim;
    const auto n = static_cast<Eigen::Index>(cloud.size());
    Eigen::MatrixXd psi(n, s + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int j = 0; j < s; ++j) psi(i, j) = cloud.points.coord(i, j);
        psi(i, s) = cloud.log_values[static_cast<std::size_t>(i)];
    }
    Eigen::MatrixXd projected = psi * projection_matrix(s, k);
    Eigen::MatrixXd out(n, 2);
    out.col(0) = projected.col(k);
    out.col(1) = projected.col(s);
    return out;
}

bool PartitionSummary::usable(int u) const {
    return counts[u] > 0 && std::isfinite(log_means[u]);
}

int PartitionSummary::usable_count() const {
    int c = 0;
    for (int u = 0; u < size(); ++u)
        if (usable(u)) ++c;
    return c;
}

namespace {

// log of the mean of exp(values), max-subtracted; values sorted by caller.
double log_mean_exp(const std::vector<double>& values) {
    double m = kNegInf;
    for (double v : values) m = std::max(m, v);
    if (m == kNegInf) return kNegInf;  // all members zero density
    KahanSum acc;
    for (double v : values) acc.add(std::exp(v - m));
    return m + std::log(acc.value() / static_cast<double>(values.size()));
}

}  // namespace

PartitionSummary partition_means(const ProjectedAxis& pa, int n, double a_k, double b_k) {
    if (n < 3) throw std::invalid_argument("partition_means: at least 3 partitions are required");
    if (!(a_k < b_k)) throw std::invalid_argument("partition_means: need a_k < b_k");
    const std::size_t npts = pa.abscissae.size();

    PartitionSummary ps;
    ps.axis = pa.axis;
    ps.edges.resize(n + 1);
    for (int u = 0; u <= n; ++u) ps.edges[u] = a_k + (b_k - a_k) * u / n;
    ps.midpoints.resize(n);
    for (int u = 0; u < n; ++u) ps.midpoints[u] = 0.5 * (ps.edges[u] + ps.edges[u + 1]);
    ps.counts.assign(n, 0);
    ps.means.assign(n, 0.0);
    ps.log_means.assign(n, std::numeric_limits<double>::quiet_NaN());

    // fixed accumulation order: sort members by (abscissa, value)
    std::vector<std::size_t> order(npts);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (pa.abscissae[a] != pa.abscissae[b]) return pa.abscissae[a] < pa.abscissae[b];
        return pa.log_values[a] < pa.log_values[b];
    });

    std::vector<std::vector<double>> members(n);
    for (std::size_t j : order) {
        double x = pa.abscissae[j];
        int u = static_cast<int>(std::floor((x - a_k) / (b_k - a_k) * n));
        u = std::clamp(u, 0, n - 1);
        while (u > 0 && x < ps.edges[u]) --u;
        while (u < n - 1 && x >= ps.edges[u + 1]) ++u;
        members[u].push_back(pa.log_values[j]);
    }

    bool any = false;
    for (int u = 0; u < n; ++u) {
        ps.counts[u] = static_cast<std::int64_t>(members[u].size());
        if (members[u].empty()) continue;
        any = true;
        ps.log_means[u] = log_mean_exp(members[u]);
        ps.means[u] = std::exp(ps.log_means[u]);
    }
    if (!any) throw std::invalid_argument("partition_means: all partitions empty");
    return ps;
}

PartitionSummary grid_axis_means(const EvaluationCloud& cloud, int k) {
    const PointSet& pts = cloud.points;
    if (pts.kind != PointSetKind::Grid)
        throw std::invalid_argument("grid_axis_means: cloud is not grid-born");
    if (k < 0 || k >= pts.dim) throw std::invalid_argument("grid_axis_means: axis out of range");
    const int n = pts.n_per_axis;
    const int s = pts.dim;

    // stride of axis k under lexicographic order (last axis fastest)
    std::int64_t stride = 1;
    for (int j = k + 1; j < s; ++j) stride *= n;

    std::vector<std::vector<double>> members(n);
    const auto per_abscissa = static_cast<std::size_t>(pts.n_points / n);
    for (auto& m : members) m.reserve(per_abscissa);
    for (std::int64_t i = 0; i < pts.n_points; ++i) {
        int g = static_cast<int>((i / stride) % n);
        members[g].push_back(cloud.log_values[static_cast<std::size_t>(i)]);
    }

    PartitionSummary ps;
    ps.axis = k;
    ps.from_grid = true;
    const double a = cloud.region.lower[k];
    const double w = cloud.region.width(k);
    ps.edges.resize(n + 1);
    for (int u = 0; u <= n; ++u) ps.edges[u] = a + w * u / n;
    ps.midpoints.resize(n);
    // same expression the scaling map used, so midpoints equal the stored abscissae exactly
    for (int g = 0; g < n; ++g) ps.midpoints[g] = a + w * (static_cast<double>(g) / n);
    ps.counts.assign(n, static_cast<std::int64_t>(per_abscissa));
    ps.means.assign(n, 0.0);
    ps.log_means.assign(n, kNegInf);
    for (int g = 0; g < n; ++g) {
        ps.log_means[g] = log_mean_exp(members[g]);
        ps.means[g] = std::exp(ps.log_means[g]);
    }
    return ps;
}

}  // namespace latmarg
