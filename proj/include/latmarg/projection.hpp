#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "latmarg/pointset.hpp"
#include "latmarg/targets.hpp"

namespace latmarg {

// Point set plus log-density evaluations. log_values may contain -inf
// sentinels (outside support) but never NaN, and at least one finite value.
struct EvaluationCloud {
    PointSet points;
    std::vector<double> log_values;
    IntegrationRegion region;

    std::int64_t size() const { return points.n_points; }
};

// Evaluates t at every point of ps (parallel across points; slot-per-point,
// so the result is deterministic). ps without a region is treated as living
// on the unit cube.
EvaluationCloud evaluate_cloud(const TargetDensity& t, const PointSet& ps);

// One marginal axis of a cloud: k-th coordinates paired with log values.
struct ProjectedAxis {
    int axis = 0;
    std::vector<double> abscissae;
    std::vector<double> log_values;
};

// Column selection; provably identical to multiplying by the explicit
// projector (see project_axis_dense).
ProjectedAxis project_axis(const EvaluationCloud& cloud, int k);

// The explicit projector P_k = A_k (A_k^T A_k)^-1 A_k^T, where A_k is the
// (s+1) x 2 selector of coordinate k and the value column.
Eigen::MatrixXd projection_matrix(int s, int k);

// Cross-check path: builds the N x (s+1) matrix of (points, values) rows,
// right-multiplies by P_k, and drops the zeroed columns, yielding N x 2.
// Requires finite values (0 * inf would poison the dropped columns).
Eigen::MatrixXd project_axis_dense(const EvaluationCloud& cloud, int k);

// Equal-width partitioning of one axis with per-partition pointwise means.
struct PartitionSummary {
    int axis = 0;
    std::vector<double> edges;       // n+1 increasing, spanning [a_k, b_k]
    std::vector<double> midpoints;   // (edges[u] + edges[u+1]) / 2
    std::vector<std::int64_t> counts;
    std::vector<double> means;       // density scale; may under/overflow
    std::vector<double> log_means;   // NaN where the partition is empty
    bool from_grid = false;          // degenerate form from grid_axis_means

    int size() const { return static_cast<int>(midpoints.size()); }
    bool usable(int u) const;        // nonempty and finite log mean
    int usable_count() const;
};

// Means are computed in the density scale (max-subtraction, Kahan sum over
// abscissa-sorted members) and stored as logs. Right-open partitions, the
// last interval right-closed. Throws when n < 3 or every partition is empty.
PartitionSummary partition_means(const ProjectedAxis& pa, int n, double a_k, double b_k);

// Pointwise means over the n^(s-1) evaluations sharing each grid abscissa
// (cloud must be grid-born). Degenerate PartitionSummary: midpoints are the
// abscissae themselves.
PartitionSummary grid_axis_means(const EvaluationCloud& cloud, int k);

}  // namespace latmarg
