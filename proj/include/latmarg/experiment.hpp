#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latmarg/io.hpp"
#include "latmarg/marginal.hpp"

namespace latmarg {

inline constexpr const char* kVersion = "0.1.0";

// One marginalization run, fully deterministic given the field values.
struct ExperimentConfig {
    std::string target = "gaussian:dim=5";
    std::string method = "cx";  // grid|stm|qa|cx|half-gaussian|oracle
    std::int64_t points = 512;  // lattice N
    std::int64_t alpha = 19;
    bool extensible = true;
    int thin = 0;               // halvings applied after generation
    int grid_n = 9;             // per-axis abscissae for method=grid
    int partitions = 15;
    int degree = 3;             // correction degree (cx)
    int stm_degree = 8;
    double region_sd = 3.0;     // region = mode +- region_sd * sd
    std::vector<double> region; // override: a1,b1,a2,b2,... (empty = from mode)
    std::vector<double> start;  // optimizer start (empty = 0.1 per axis)
    int metric_grid = 1001;
    int oracle_n = 0;           // dense-grid abscissae per axis; 0 = auto by dimension
    bool compare = true;        // emit distances to the oracle
    std::string out = "out";
};

// Largest odd per-axis count in [5, 41] keeping the dense oracle around 1e6
// evaluations (e.g. 41 for 1-3 dimensions, 31 for 4, 15 for 5).
int auto_oracle_n(int dim);

// Strict key=value config file; unknown keys are rejected.
ExperimentConfig config_from_file(const std::string& path);
void config_to_file(const ExperimentConfig& cfg, const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

struct RunManifest {
    nlohmann::json config_echo;
    std::string version;
    std::vector<std::string> outputs;                       // file paths written
    std::vector<std::pair<std::string, double>> stage_ms;   // wall time per stage
    std::int64_t evaluation_count = 0;
    std::vector<int> runge_axes;                            // 1-based

    nlohmann::json to_json() const;
};

// Runs the configured pipeline end to end: per-axis marginal JSON + CSV in
// both scales, a comparison CSV when an oracle is configured, and the
// manifest. Returns the manifest (also written to <out>/manifest.json).
RunManifest run_experiment(const ExperimentConfig& cfg);

struct StudyRow {
    std::string method;
    std::int64_t n_points = 0;
    int axis = 0;  // 0-based in memory
    double kl = 0.0;
    double hellinger = 0.0;
    double walltime_ms = 0.0;
};

// Convergence study: lattice QA/CX across the given sizes plus grid runs at
// the given per-axis densities, each scored against the oracle.
std::vector<StudyRow> convergence_study(const ExperimentConfig& base,
                                        const std::vector<std::int64_t>& lattice_sizes,
                                        const std::vector<int>& grid_ns);

void write_study_csv(const std::vector<StudyRow>& rows, const std::string& path);

}  // namespace latmarg
