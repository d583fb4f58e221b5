// Command-line front end: deterministic point sets, projections,
// marginalization runs, density comparisons, and convergence studies.
#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <vector>

#include "latmarg/baselines.hpp"
#include "latmarg/errors.hpp"
#include "latmarg/experiment.hpp"
#include "latmarg/io.hpp"
#include "latmarg/marginalize.hpp"
#include "latmarg/metrics.hpp"
#include "latmarg/pointset.hpp"
#include "latmarg/targets.hpp"

namespace {

using namespace latmarg;

IntegrationRegion region_from_flat(const std::vector<double>& flat) {
    if (flat.size() < 2 || flat.size() % 2 != 0)
        throw std::invalid_argument("--region needs a1,b1,a2,b2,...");
    std::vector<double> lo, hi;
    for (std::size_t i = 0; i < flat.size(); i += 2) {
        lo.push_back(flat[i]);
        hi.push_back(flat[i + 1]);
    }
    return IntegrationRegion(std::move(lo), std::move(hi));
}

int cmd_points(const std::string& kind, std::int64_t n, int dim, std::int64_t alpha,
               bool extensible, int thin, const std::vector<double>& region_flat,
               const std::string& out) {
    PointSet ps;
    if (kind == "grid") {
        ps = generate_grid(static_cast<int>(n), dim);
    } else if (kind == "korobov") {
        if (alpha == 0) {
            alpha = search_generating_constant(n, dim);
            std::cerr << "merit search selected alpha = " << alpha << "\n";
        }
        ps = generate_korobov(n, dim, alpha, extensible);
        if (!ps.coprime)
            std::cerr << "warning: gcd(alpha, N) != 1; the lattice is not projection regular\n";
    } else {
        throw std::invalid_argument("--kind must be grid or korobov");
    }
    if (thin > 0) ps = thin_lattice(ps, thin);
    if (!region_flat.empty()) ps = scale_to_region(ps, region_from_flat(region_flat));
    write_points_csv(ps, out);
    std::cout << "wrote " << ps.n_points << " points to " << out << "\n";
    return 0;
}

int cmd_project(const ExperimentConfig& cfg, const std::string& out) {
    TargetDensity target = parse_target(cfg.target);
    std::optional<ModeSummary> ms;
    if (cfg.region.empty()) {
        std::vector<double> start = cfg.start.empty() ? std::vector<double>(target.dim, 0.1) : cfg.start;
        ms = find_mode_hessian(target, start);
    }
    IntegrationRegion region = cfg.region.empty() ? build_region(*ms, cfg.region_sd)
                                                  : region_from_flat(cfg.region);
    PointSet lattice = generate_korobov(cfg.points, target.dim, cfg.alpha, cfg.extensible);
    if (cfg.thin > 0) lattice = thin_lattice(lattice, cfg.thin);
    EvaluationCloud cloud = evaluate_cloud(target, scale_to_region(lattice, region));
    std::vector<PartitionSummary> summaries;
    for (int k = 0; k < target.dim; ++k)
        summaries.push_back(partition_means(project_axis(cloud, k), cfg.partitions,
                                            region.lower[k], region.upper[k]));
    write_partition_csv(summaries, out);
    std::cout << "wrote per-axis partition means to " << out << "\n";
    return 0;
}

int cmd_compare(const std::string& p_path, const std::string& q_path, int m, const std::string& out) {
    MarginalApprox p = load_marginal(p_path);
    MarginalApprox q = load_marginal(q_path);
    DistanceReport r = compare_marginals(p, q, m);
    std::vector<DistanceReport> rows{r};
    if (!out.empty()) write_distance_csv(rows, out);
    std::cout << "axis,kl,hellinger\n"
              << (r.axis + 1) << "," << format_double(r.kl) << "," << format_double(r.hellinger)
              << "\n";
    return 0;
}

// Options shared by project/marginalize/study; returns an overlay function
// that applies explicitly-passed flags on top of a config-file base.
std::function<ExperimentConfig()> add_run_options(CLI::App* cmd, ExperimentConfig& flags,
                                                  std::string& config_path) {
    cmd->add_option("--config", config_path, "key=value config file (flags override)");
    cmd->add_option("--target", flags.target, "target label, e.g. gaussian:dim=5");
    cmd->add_option("--points,-N", flags.points, "lattice point count");
    cmd->add_option("--alpha", flags.alpha, "Korobov generating constant");
    cmd->add_flag("--extensible,!--no-extensible", flags.extensible, "extensible lattice");
    cmd->add_option("--thin", flags.thin, "halvings applied to the lattice");
    cmd->add_option("--grid-n", flags.grid_n, "grid abscissae per axis");
    cmd->add_option("--partitions,-n", flags.partitions, "partitions per axis");
    cmd->add_option("--degree,-x", flags.degree, "correction polynomial degree");
    cmd->add_option("--stm-degree", flags.stm_degree, "LDS-StM polynomial degree");
    cmd->add_option("--region-sd,-c", flags.region_sd, "region half width in mode sds");
    cmd->add_option("--region", flags.region, "region override a1,b1,a2,b2,...")->delimiter(',');
    cmd->add_option("--start", flags.start, "optimizer start")->delimiter(',');
    cmd->add_option("--metric-grid", flags.metric_grid, "metric evaluation nodes");
    cmd->add_option("--oracle-n", flags.oracle_n, "dense-grid oracle abscissae per axis (0 = auto)");
    cmd->add_flag("--compare,!--no-compare", flags.compare, "emit comparison against the oracle");

    return [cmd, &flags, &config_path]() {
        if (config_path.empty()) return flags;
        ExperimentConfig cfg = config_from_file(config_path);
        auto passed = [cmd](const char* name) { return cmd->count(name) > 0; };
        if (passed("--target")) cfg.target = flags.target;
        if (passed("--points")) cfg.points = flags.points;
        if (passed("--alpha")) cfg.alpha = flags.alpha;
        if (passed("--extensible")) cfg.extensible = flags.extensible;
        if (passed("--thin")) cfg.thin = flags.thin;
        if (passed("--grid-n")) cfg.grid_n = flags.grid_n;
        if (passed("--partitions")) cfg.partitions = flags.partitions;
        if (passed("--degree")) cfg.degree = flags.degree;
        if (passed("--stm-degree")) cfg.stm_degree = flags.stm_degree;
        if (passed("--region-sd")) cfg.region_sd = flags.region_sd;
        if (passed("--region")) cfg.region = flags.region;
        if (passed("--start")) cfg.start = flags.start;
        if (passed("--metric-grid")) cfg.metric_grid = flags.metric_grid;
        if (passed("--oracle-n")) cfg.oracle_n = flags.oracle_n;
        if (passed("--compare")) cfg.compare = flags.compare;
        return cfg;
    };
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"low-discrepancy marginal density approximation"};
    app.require_subcommand(1);

    // points
    auto* points = app.add_subcommand("points", "generate a deterministic point set as CSV");
    std::string kind = "korobov", points_out = "points.csv";
    std::int64_t pn = 512, palpha = 0;
    int pdim = 2, pthin = 0;
    bool pext = false;
    std::vector<double> pregion;
    points->add_option("--kind", kind, "grid or korobov");
    points->add_option("--n,-N", pn, "points (grid: per-axis abscissae)")->required();
    points->add_option("--dim,-s", pdim, "dimension")->required();
    points->add_option("--alpha", palpha, "generating constant (0 = merit search)");
    points->add_flag("--extensible", pext, "mark the lattice extensible");
    points->add_option("--thin", pthin, "halvings");
    points->add_option("--region", pregion, "scale into a1,b1,a2,b2,...")->delimiter(',');
    points->add_option("--out", points_out, "output CSV path");

    // project
    auto* project = app.add_subcommand("project", "per-axis partition pointwise means as CSV");
    ExperimentConfig pj_flags;
    std::string pj_config_path, project_out = "projection.csv";
    auto pj_resolve = add_run_options(project, pj_flags, pj_config_path);
    project->add_option("--out", project_out, "output CSV path");

    // marginalize
    auto* marg = app.add_subcommand("marginalize", "run one marginalization method end to end");
    ExperimentConfig mg_flags;
    std::string mg_config_path;
    auto mg_resolve = add_run_options(marg, mg_flags, mg_config_path);
    marg->add_option("--method", mg_flags.method, "grid|stm|qa|cx|half-gaussian|oracle");
    marg->add_option("--out", mg_flags.out, "output directory");

    // compare
    auto* comp = app.add_subcommand("compare", "KL and Hellinger between two marginal JSONs");
    std::string comp_p, comp_q, comp_out;
    int comp_m = 1001;
    comp->add_option("p", comp_p, "first marginal (reference) JSON")->required();
    comp->add_option("q", comp_q, "second marginal JSON")->required();
    comp->add_option("--grid,-m", comp_m, "evaluation nodes");
    comp->add_option("--out", comp_out, "optional CSV path");

    // study
    auto* study = app.add_subcommand("study", "convergence study across point budgets");
    ExperimentConfig st_flags;
    std::string st_config_path, study_out = "study.csv";
    std::vector<std::int64_t> st_sizes{64, 128, 256, 512, 1024};
    std::vector<int> st_grids{4, 6, 8};
    auto st_resolve = add_run_options(study, st_flags, st_config_path);
    study->add_option("--sizes", st_sizes, "lattice sizes")->delimiter(',');
    study->add_option("--grids", st_grids, "grid per-axis densities")->delimiter(',');
    study->add_option("--out", study_out, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (points->parsed())
            return cmd_points(kind, pn, pdim, palpha, pext, pthin, pregion, points_out);
        if (project->parsed()) return cmd_project(pj_resolve(), project_out);
        if (marg->parsed()) {
            ExperimentConfig cfg = mg_resolve();
            if (marg->count("--method")) cfg.method = mg_flags.method;
            if (marg->count("--out")) cfg.out = mg_flags.out;
            RunManifest manifest = run_experiment(cfg);
            std::cout << "wrote " << manifest.outputs.size() << " files under " << cfg.out << "\n";
            return 0;
        }
        if (comp->parsed()) return cmd_compare(comp_p, comp_q, comp_m, comp_out);
        if (study->parsed()) {
            auto rows = convergence_study(st_resolve(), st_sizes, st_grids);
            write_study_csv(rows, study_out);
            std::cout << "wrote " << rows.size() << " study rows to " << study_out << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
