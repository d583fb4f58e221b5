#pragma once

#include <string>
#include <vector>

#include "latmarg/marginal.hpp"
#include "latmarg/metrics.hpp"
#include "latmarg/pointset.hpp"
#include "latmarg/projection.hpp"

// single-header nlohmann/json from vendor/
#include "json.hpp"

namespace latmarg {

// 17-significant-digit, locale-independent float formatting for CSV output.
std::string format_double(double v);

void write_points_csv(const PointSet& ps, const std::string& path);
void write_partition_csv(const std::vector<PartitionSummary>& summaries, const std::string& path);

// 1001 (x, density) rows over the marginal's support.
void write_marginal_csv(const MarginalApprox& m, const std::string& path, int nodes = 1001);

void write_distance_csv(const std::vector<DistanceReport>& rows, const std::string& path);

// Versioned JSON descriptor (schema: 1). Analytic shapes are tabulated on
// write, so a reloaded marginal reproduces the original to interpolation
// accuracy; every other shape round-trips exactly.
nlohmann::json marginal_to_json(const MarginalApprox& m);
MarginalApprox marginal_from_json(const nlohmann::json& j);

void save_marginal(const MarginalApprox& m, const std::string& path);
MarginalApprox load_marginal(const std::string& path);

}  // namespace latmarg
