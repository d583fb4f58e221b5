#include "latmarg/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace latmarg {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    return f;
}

}  // namespace

void write_points_csv(const PointSet& ps, const std::string& path) {
    std::ofstream f = open_out(path);
    for (int k = 0; k < ps.dim; ++k) f << (k ? "," : "") << "x" << (k + 1);
    f << "\n";
    for (std::int64_t i = 0; i < ps.n_points; ++i) {
        for (int k = 0; k < ps.dim; ++k) f << (k ? "," : "") << format_double(ps.coord(i, k));
        f << "\n";
    }
}

void write_partition_csv(const std::vector<PartitionSummary>& summaries, const std::string& path) {
    std::ofstream f = open_out(path);
    f << "axis,partition,midpoint,count,log_mean\n";
    for (const auto& ps : summaries)
        for (int u = 0; u < ps.size(); ++u)
            f << (ps.axis + 1) << "," << (u + 1) << "," << format_double(ps.midpoints[u]) << ","
              << ps.counts[u] << "," << format_double(ps.log_means[u]) << "\n";
}

void write_marginal_csv(const MarginalApprox& m, const std::string& path, int nodes) {
    std::ofstream f = open_out(path);
    f << (m.scale == DensityScale::Theta ? "theta" : "theta_z") << ",density\n";
    const double h = (m.hi - m.lo) / (nodes - 1);
    for (int i = 0; i < nodes; ++i) {
        double x = m.lo + h * i;
        f << format_double(x) << "," << format_double(m.density(x)) << "\n";
    }
}

void write_distance_csv(const std::vector<DistanceReport>& rows, const std::string& path) {
    std::ofstream f = open_out(path);
    f << "axis,kl,hellinger\n";
    for (const auto& r : rows)
        f << (r.axis + 1) << "," << format_double(r.kl) << "," << format_double(r.hellinger) << "\n";
}

namespace {

json shape_to_json(const MarginalApprox& m) {
    json j;
    if (const auto* lp = std::get_if<LogPolyShape>(&m.shape)) {
        j["kind"] = "log_poly";
        j["coeffs"] = lp->poly.coeffs;
        j["log_offset"] = lp->log_offset;
    } else if (const auto* dp = std::get_if<DensityPolyShape>(&m.shape)) {
        j["kind"] = "density_poly";
        j["coeffs"] = dp->coeffs;
    } else if (const auto* sp = std::get_if<SplineShape>(&m.shape)) {
        j["kind"] = "spline";
        j["knots"] = sp->spline.knots();
        j["values"] = sp->spline.values();
    } else if (const auto* hg = std::get_if<HalfGaussianShape>(&m.shape)) {
        j["kind"] = "half_gaussian";
        j["mu"] = hg->mu;
        j["sigma_minus"] = hg->sigma_minus;
        j["sigma_plus"] = hg->sigma_plus;
    } else if (const auto* tb = std::get_if<TabulatedShape>(&m.shape)) {
        j["kind"] = "tabulated";
        j["knots"] = tb->spline.knots();
        j["values"] = tb->spline.values();
    } else if (const auto* an = std::get_if<AnalyticShape>(&m.shape)) {
        // tabulate the closed form on a dense grid
        constexpr int kNodes = 2001;
        std::vector<double> xs(kNodes), ys(kNodes);
        const double h = (m.shape_hi - m.shape_lo) / (kNodes - 1);
        for (int i = 0; i < kNodes; ++i) {
            xs[i] = m.shape_lo + h * i;
            ys[i] = an->density(xs[i]);
        }
        j["kind"] = "tabulated";
        j["knots"] = xs;
        j["values"] = ys;
    }
    return j;
}

MethodTag tag_from_string(const std::string& s) {
    if (s == "grid") return MethodTag::Grid;
    if (s == "stm") return MethodTag::StM;
    if (s == "qa") return MethodTag::QA;
    if (s == "cx") return MethodTag::CX;
    if (s == "half-gaussian") return MethodTag::HalfGaussian;
    if (s == "oracle") return MethodTag::Oracle;
    throw std::invalid_argument("unknown method tag: " + s);
}

}  // namespace

json marginal_to_json(const MarginalApprox& m) {
    json j;
    j["schema"] = 1;
    j["method"] = to_string(m.method);
    j["correction_degree"] = m.correction_degree;
    j["axis"] = m.axis + 1;  // files use 1-based axis numbering
    j["scale"] = m.scale == DensityScale::Theta ? "theta" : "theta_z";
    j["support"] = {m.lo, m.hi};
    j["shape_support"] = {m.shape_lo, m.shape_hi};
    j["normalizer"] = m.normalizer;
    j["log_reparam"] = m.log_reparam;
    j["runge_flag"] = m.runge_flag;
    j["clamped_nodes"] = m.clamped_nodes;
    j["shape"] = shape_to_json(m);
    return j;
}

MarginalApprox marginal_from_json(const json& j) {
    if (!j.contains("schema") || j.at("schema").get<int>() != 1)
        throw std::invalid_argument("marginal_from_json: unsupported schema");
    MarginalApprox m;
    m.method = tag_from_string(j.at("method").get<std::string>());
    m.correction_degree = j.value("correction_degree", 0);
    m.axis = j.at("axis").get<int>() - 1;
    m.scale = j.at("scale").get<std::string>() == "theta" ? DensityScale::Theta : DensityScale::ThetaZ;
    m.lo = j.at("support")[0].get<double>();
    m.hi = j.at("support")[1].get<double>();
    m.shape_lo = j.at("shape_support")[0].get<double>();
    m.shape_hi = j.at("shape_support")[1].get<double>();
    m.normalizer = j.at("normalizer").get<double>();
    m.log_reparam = j.value("log_reparam", false);
    m.runge_flag = j.value("runge_flag", false);
    m.clamped_nodes = j.value("clamped_nodes", 0);

    const json& s = j.at("shape");
    const std::string kind = s.at("kind").get<std::string>();
    if (kind == "log_poly") {
        LogPolyShape lp;
        lp.poly.axis = m.axis;
        lp.poly.coeffs = s.at("coeffs").get<std::vector<double>>();
        lp.poly.lo = m.shape_lo;
        lp.poly.hi = m.shape_hi;
        lp.log_offset = s.at("log_offset").get<double>();
        m.shape = std::move(lp);
    } else if (kind == "density_poly") {
        DensityPolyShape dp;
        dp.coeffs = s.at("coeffs").get<std::vector<double>>();
        dp.lo = m.shape_lo;
        dp.hi = m.shape_hi;
        m.shape = std::move(dp);
    } else if (kind == "spline") {
        m.shape = SplineShape{CubicSpline(s.at("knots").get<std::vector<double>>(),
                                          s.at("values").get<std::vector<double>>())};
    } else if (kind == "half_gaussian") {
        m.shape = HalfGaussianShape{s.at("mu").get<double>(), s.at("sigma_minus").get<double>(),
                                    s.at("sigma_plus").get<double>()};
    } else if (kind == "tabulated") {
        m.shape = TabulatedShape{CubicSpline(s.at("knots").get<std::vector<double>>(),
                                             s.at("values").get<std::vector<double>>())};
    } else {
        throw std::invalid_argument("marginal_from_json: unknown shape kind " + kind);
    }
    return m;
}

void save_marginal(const MarginalApprox& m, const std::string& path) {
    std::ofstream f = open_out(path);
    f << marginal_to_json(m).dump(2) << "\n";
}

MarginalApprox load_marginal(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    json j;
    f >> j;
    return marginal_from_json(j);
}

}  // namespace latmarg
