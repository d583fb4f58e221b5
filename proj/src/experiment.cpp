#include "latmarg/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "latmarg/baselines.hpp"
#include "latmarg/errors.hpp"
#include "latmarg/marginalize.hpp"
#include "latmarg/metrics.hpp"
#include "latmarg/pointset.hpp"
#include "latmarg/targets.hpp"

namespace latmarg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<double> parse_number_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::string join_numbers(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
    return out;
}

class StageTimer {
  public:
    explicit StageTimer(RunManifest& m) : manifest_(m) {}
    template <class Fn>
    auto run(const std::string& stage, Fn&& fn) {
        auto t0 = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            record(stage, t0);
        } else {
            auto result = fn();
            record(stage, t0);
            return result;
        }
    }

  private:
    void record(const std::string& stage, std::chrono::steady_clock::time_point t0) {
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        manifest_.stage_ms.emplace_back(stage, ms);
    }
    RunManifest& manifest_;
};

}  // namespace

ExperimentConfig config_from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config: " + path);
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto notspace = line.find_first_not_of(" \t\r");
        if (notspace == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "target") cfg.target = val;
        else if (key == "method") cfg.method = val;
        else if (key == "points") cfg.points = std::stoll(val);
        else if (key == "alpha") cfg.alpha = std::stoll(val);
        else if (key == "extensible") cfg.extensible = val == "true" || val == "1";
        else if (key == "thin") cfg.thin = std::stoi(val);
        else if (key == "grid-n") cfg.grid_n = std::stoi(val);
        else if (key == "partitions") cfg.partitions = std::stoi(val);
        else if (key == "degree") cfg.degree = std::stoi(val);
        else if (key == "stm-degree") cfg.stm_degree = std::stoi(val);
        else if (key == "region-sd") cfg.region_sd = std::stod(val);
        else if (key == "region") cfg.region = parse_number_list(val);
        else if (key == "start") cfg.start = parse_number_list(val);
        else if (key == "metric-grid") cfg.metric_grid = std::stoi(val);
        else if (key == "oracle-n") cfg.oracle_n = std::stoi(val);
        else if (key == "compare") cfg.compare = val == "true" || val == "1";
        else if (key == "out") cfg.out = val;
        else throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    return cfg;
}

void config_to_file(const ExperimentConfig& cfg, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write config: " + path);
    f << "target = " << cfg.target << "\n"
      << "method = " << cfg.method << "\n"
      << "points = " << cfg.points << "\n"
      << "alpha = " << cfg.alpha << "\n"
      << "extensible = " << (cfg.extensible ? "true" : "false") << "\n"
      << "thin = " << cfg.thin << "\n"
      << "grid-n = " << cfg.grid_n << "\n"
      << "partitions = " << cfg.partitions << "\n"
      << "degree = " << cfg.degree << "\n"
      << "stm-degree = " << cfg.stm_degree << "\n"
      << "region-sd = " << format_double(cfg.region_sd) << "\n";
    if (!cfg.region.empty()) f << "region = " << join_numbers(cfg.region) << "\n";
    if (!cfg.start.empty()) f << "start = " << join_numbers(cfg.start) << "\n";
    f << "metric-grid = " << cfg.metric_grid << "\n"
      << "oracle-n = " << cfg.oracle_n << "\n"
      << "compare = " << (cfg.compare ? "true" : "false") << "\n"
      << "out = " << cfg.out << "\n";
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["target"] = cfg.target;
    j["method"] = cfg.method;
    j["points"] = cfg.points;
    j["alpha"] = cfg.alpha;
    j["extensible"] = cfg.extensible;
    j["thin"] = cfg.thin;
    j["grid_n"] = cfg.grid_n;
    j["partitions"] = cfg.partitions;
    j["degree"] = cfg.degree;
    j["stm_degree"] = cfg.stm_degree;
    j["region_sd"] = cfg.region_sd;
    j["region"] = cfg.region;
    j["start"] = cfg.start;
    j["metric_grid"] = cfg.metric_grid;
    j["oracle_n"] = cfg.oracle_n;
    j["compare"] = cfg.compare;
    j["out"] = cfg.out;
    return j;
}

json RunManifest::to_json() const {
    json j;
    j["schema"] = 1;
    j["version"] = version;
    j["config"] = config_echo;
    j["outputs"] = outputs;
    json stages = json::object();
    for (const auto& [name, ms] : stage_ms) stages[name] = ms;
    j["stage_walltime_ms"] = stages;
    j["evaluation_count"] = evaluation_count;
    j["runge_axes"] = runge_axes;
    return j;
}

int auto_oracle_n(int dim) {
    for (int n = 41; n > 5; n -= 2) {
        double evals = std::pow(static_cast<double>(n), dim);
        if (evals <= 1e6) return n;
    }
    return 5;
}

namespace {

int effective_oracle_n(const ExperimentConfig& cfg, int dim) {
    return cfg.oracle_n > 0 ? cfg.oracle_n : auto_oracle_n(dim);
}

IntegrationRegion region_from_config(const ExperimentConfig& cfg, int dim, const ModeSummary* ms) {
    if (!cfg.region.empty()) {
        if (static_cast<int>(cfg.region.size()) != 2 * dim)
            throw std::invalid_argument("region override needs 2*dim numbers (a1,b1,a2,b2,...)");
        std::vector<double> lo(dim), hi(dim);
        for (int k = 0; k < dim; ++k) {
            lo[k] = cfg.region[2 * k];
            hi[k] = cfg.region[2 * k + 1];
        }
        return IntegrationRegion(std::move(lo), std::move(hi));
    }
    if (!ms) throw std::invalid_argument("region requires a mode summary");
    return build_region(*ms, cfg.region_sd);
}

std::vector<double> start_from_config(const ExperimentConfig& cfg, int dim) {
    if (!cfg.start.empty()) {
        if (static_cast<int>(cfg.start.size()) != dim)
            throw std::invalid_argument("start needs dim numbers");
        return cfg.start;
    }
    return std::vector<double>(dim, 0.1);  // deterministic default, off exact symmetry points
}

}  // namespace

RunManifest run_experiment(const ExperimentConfig& cfg) {
    RunManifest manifest;
    manifest.version = kVersion;
    manifest.config_echo = config_to_json(cfg);
    StageTimer timer(manifest);

    const TargetDensity target = parse_target(cfg.target);
    const int dim = target.dim;

    // mode/Hessian: needed for the region (unless overridden) and for half-gaussian
    const bool needs_mode = cfg.region.empty() || cfg.method == "half-gaussian";
    std::optional<ModeSummary> ms;
    if (needs_mode) {
        auto start = start_from_config(cfg, dim);
        ms = timer.run("mode", [&] { return find_mode_hessian(target, start); });
    }
    const IntegrationRegion region = region_from_config(cfg, dim, ms ? &*ms : nullptr);

    std::vector<MarginalApprox> marginals;
    if (cfg.method == "grid") {
        auto cloud = timer.run("evaluate", [&] {
            PointSet grid = scale_to_region(generate_grid(cfg.grid_n, dim), region);
            return evaluate_cloud(target, grid);
        });
        manifest.evaluation_count += cloud.size();
        marginals = timer.run("fit", [&] { return grid_from_cloud(cloud); });
    } else if (cfg.method == "stm" || cfg.method == "qa" || cfg.method == "cx") {
        auto cloud = timer.run("evaluate", [&] {
            PointSet lattice = generate_korobov(cfg.points, dim, cfg.alpha, cfg.extensible);
            if (cfg.thin > 0) lattice = thin_lattice(lattice, cfg.thin);
            return evaluate_cloud(target, scale_to_region(lattice, region));
        });
        manifest.evaluation_count += cloud.size();
        marginals = timer.run("fit", [&] {
            if (cfg.method == "stm") return stm_from_cloud(cloud, cfg.stm_degree);
            if (cfg.method == "qa") return qa_from_cloud(cloud, cfg.partitions);
            return cx_from_cloud(cloud, cfg.partitions, cfg.degree);
        });
    } else if (cfg.method == "half-gaussian") {
        marginals = timer.run("fit", [&] { return half_gaussian_baseline(target, *ms, &region); });
        manifest.evaluation_count += 1 + 4 * dim;  // mode value + two slices per side per axis
    } else if (cfg.method == "oracle") {
        // explicit oracle request builds the dense grid; the comparison below
        // then scores it against the analytic marginals where they exist
        const int dense_n = effective_oracle_n(cfg, dim);
        marginals = timer.run("fit", [&] { return dense_grid_oracle(target, region, dense_n); });
        std::int64_t evals = 1;
        for (int k = 0; k < dim; ++k) evals *= dense_n;
        manifest.evaluation_count += evals;
    } else {
        throw std::invalid_argument("unknown method '" + cfg.method + "'");
    }

    for (const auto& m : marginals)
        if (m.runge_flag) manifest.runge_axes.push_back(m.axis + 1);

    timer.run("write", [&] {
        fs::create_directories(cfg.out);
        for (int k = 0; k < dim; ++k) {
            const MarginalApprox& mz = marginals[k];
            std::string base = cfg.out + "/axis" + std::to_string(k + 1);
            save_marginal(mz, base + "_thetaz.json");
            write_marginal_csv(mz, base + "_thetaz.csv");
            MarginalApprox mt = inverse_transform_marginal(mz, target.reparam[k]);
            save_marginal(mt, base + "_theta.json");
            write_marginal_csv(mt, base + "_theta.csv");
            manifest.outputs.push_back(base + "_thetaz.json");
            manifest.outputs.push_back(base + "_thetaz.csv");
            manifest.outputs.push_back(base + "_theta.json");
            manifest.outputs.push_back(base + "_theta.csv");
        }
    });

    if (cfg.compare) {
        timer.run("compare", [&] {
            const int dense_n = effective_oracle_n(cfg, dim);
            auto oracle = oracle_marginals(target, region, dense_n);
            bool all_analytic = true;
            for (int k = 0; k < dim; ++k) all_analytic = all_analytic && target.analytic_marginal[k];
            if (!all_analytic) {
                std::int64_t evals = 1;
                for (int k = 0; k < dim; ++k) evals *= dense_n;
                manifest.evaluation_count += evals;
            }
            std::vector<DistanceReport> rows;
            for (int k = 0; k < dim; ++k)
                rows.push_back(compare_marginals(oracle[k], marginals[k], cfg.metric_grid));
            write_distance_csv(rows, cfg.out + "/comparison.csv");
            manifest.outputs.push_back(cfg.out + "/comparison.csv");
        });
    }

    std::ofstream mf(cfg.out + "/manifest.json");
    if (!mf) throw std::runtime_error("cannot write manifest");
    mf << manifest.to_json().dump(2) << "\n";
    return manifest;
}

std::vector<StudyRow> convergence_study(const ExperimentConfig& base,
                                        const std::vector<std::int64_t>& lattice_sizes,
                                        const std::vector<int>& grid_ns) {
    const TargetDensity target = parse_target(base.target);
    const int dim = target.dim;
    std::optional<ModeSummary> ms;
    if (base.region.empty()) ms = find_mode_hessian(target, start_from_config(base, dim));
    const IntegrationRegion region = region_from_config(base, dim, ms ? &*ms : nullptr);
    const auto oracle = oracle_marginals(target, region, effective_oracle_n(base, dim));

    std::vector<StudyRow> rows;
    auto score = [&](const std::string& method, std::int64_t n_points,
                     const std::vector<MarginalApprox>& marginals, double ms_elapsed) {
        for (int k = 0; k < dim; ++k) {
            DistanceReport r = compare_marginals(oracle[k], marginals[k], base.metric_grid);
            rows.push_back({method, n_points, k, r.kl, r.hellinger, ms_elapsed});
        }
    };

    for (std::int64_t n : lattice_sizes) {
        auto t0 = std::chrono::steady_clock::now();
        PointSet lattice = scale_to_region(generate_korobov(n, dim, base.alpha, base.extensible), region);
        EvaluationCloud cloud = evaluate_cloud(target, lattice);
        auto qa = qa_from_cloud(cloud, base.partitions);
        double ms_qa = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        score("qa", n, qa, ms_qa);

        t0 = std::chrono::steady_clock::now();
        auto cx = cx_from_cloud(cloud, base.partitions, base.degree);
        double ms_cx = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        score("cx" + std::to_string(base.degree), n, cx, ms_qa + ms_cx);
    }
    for (int gn : grid_ns) {
        auto t0 = std::chrono::steady_clock::now();
        auto grid = marginalize_grid(target, region, gn);
        double ms_grid = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        std::int64_t total = 1;
        for (int k = 0; k < dim; ++k) total *= gn;
        score("grid", total, grid, ms_grid);
    }
    return rows;
}

void write_study_csv(const std::vector<StudyRow>& rows, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << "method,N,axis,kl,hellinger,walltime_ms\n";
    for (const auto& r : rows)
        f << r.method << "," << r.n_points << "," << (r.axis + 1) << "," << format_double(r.kl)
          << "," << format_double(r.hellinger) << "," << format_double(r.walltime_ms) << "\n";
}

}  // namespace latmarg
