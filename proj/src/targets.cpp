#include "latmarg/targets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "latmarg/errors.hpp"
#include "latmarg/numeric.hpp"

namespace latmarg {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

double normal_logpdf(double x, double mu, double sigma) {
    double z = (x - mu) / sigma;
    return -0.5 * z * z - std::log(sigma) - kLogSqrt2Pi;
}

// Check the marginal integrates to 1 over center +- 12*spread.
void check_marginal(const AnalyticMarginal& m, const std::string& label, int axis) {
    double lo = m.center - 12.0 * m.spread;
    double hi = m.center + 12.0 * m.spread;
    double z = simpson(m.density, lo, hi, 4001);
    if (std::abs(z - 1.0) > 1e-6) {
        std::ostringstream os;
        os << label << ": analytic marginal of axis " << axis << " integrates to " << z;
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

TargetDensity make_gaussian(const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance) {
    const auto s = static_cast<int>(mean.size());
    if (s < 1 || covariance.rows() != s || covariance.cols() != s)
        throw std::invalid_argument("make_gaussian: dimension mismatch");
    double scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
    if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
        throw std::invalid_argument("make_gaussian: covariance not symmetric");
    auto llt = std::make_shared<Eigen::LLT<Eigen::MatrixXd>>(covariance);
    if (llt->info() != Eigen::Success)
        throw std::invalid_argument("make_gaussian: covariance not positive definite");

    double logdet = 0.0;
    for (int k = 0; k < s; ++k) logdet += 2.0 * std::log(llt->matrixL()(k, k));
    const double log_norm = -0.5 * (s * std::log(2.0 * std::numbers::pi) + logdet);
    Eigen::VectorXd mu = mean;

    TargetDensity t;
    t.dim = s;
    t.label = "gaussian";
    t.log_density = [llt, mu, log_norm, s](std::span<const double> x) {
        Eigen::Map<const Eigen::VectorXd> xv(x.data(), s);
        Eigen::VectorXd d = xv - mu;
        double quad = llt->matrixL().solve(d).squaredNorm();
        return log_norm - 0.5 * quad;
    };
    t.reparam.assign(s, Reparam::Identity);
    t.analytic_marginal.resize(s);
    for (int k = 0; k < s; ++k) {
        double m = mean(k);
        double sd = std::sqrt(covariance(k, k));
        AnalyticMarginal am;
        am.density = [m, sd](double x) { return std::exp(normal_logpdf(x, m, sd)); };
        am.center = m;
        am.spread = sd;
        check_marginal(am, t.label, k);
        t.analytic_marginal[k] = std::move(am);
    }
    return t;
}

TargetDensity make_skewed(int dim, std::span<const double> shapes) {
    if (dim < 1 || static_cast<int>(shapes.size()) != dim)
        throw std::invalid_argument("make_skewed: need one shape per axis");
    for (double a : shapes)
        if (!(a > 0.0)) throw std::invalid_argument("make_skewed: shapes must be positive");

    auto shp = std::make_shared<std::vector<double>>(shapes.begin(), shapes.end());
    auto lg = std::make_shared<std::vector<double>>(dim);
    for (int k = 0; k < dim; ++k) (*lg)[k] = std::lgamma((*shp)[k]);

    TargetDensity t;
    t.dim = dim;
    t.label = "skewed";
    // log-Gamma axis density: a*x - e^x - lgamma(a)
    t.log_density = [shp, lg, dim](std::span<const double> x) {
        double acc = 0.0;
        for (int k = 0; k < dim; ++k)
            acc += (*shp)[k] * x[k] - std::exp(x[k]) - (*lg)[k];
        return acc;
    };
    t.reparam.assign(dim, Reparam::Log);
    t.analytic_marginal.resize(dim);
    for (int k = 0; k < dim; ++k) {
        double a = (*shp)[k];
        double lga = (*lg)[k];
        AnalyticMarginal am;
        am.density = [a, lga](double x) { return std::exp(a * x - std::exp(x) - lga); };
        am.center = std::log(a);
        am.spread = std::sqrt(trigamma(a));
        check_marginal(am, t.label, k);
        t.analytic_marginal[k] = std::move(am);
    }
    return t;
}

TargetDensity make_bimodal(int dim, int axis, double separation, double weight) {
    if (dim < 1) throw std::invalid_argument("make_bimodal: need dim >= 1");
    if (axis < 0 || axis >= dim) throw std::invalid_argument("make_bimodal: axis out of range");
    // separation 0 is allowed and collapses the mixture to a standard normal
    if (!(separation >= 0.0)) throw std::invalid_argument("make_bimodal: need separation >= 0");
    if (!(weight > 0.0 && weight < 1.0)) throw std::invalid_argument("make_bimodal: need weight in (0,1)");

    const double half = separation / 2.0;
    const double lw = std::log(weight);
    const double lw1 = std::log1p(-weight);
    auto mix_logpdf = [half, lw, lw1](double x) {
        double a = lw + normal_logpdf(x, -half, 1.0);
        double b = lw1 + normal_logpdf(x, half, 1.0);
        double m = std::max(a, b);
        return m + std::log(std::exp(a - m) + std::exp(b - m));
    };

    TargetDensity t;
    t.dim = dim;
    t.label = "bimodal";
    t.log_density = [mix_logpdf, axis, dim](std::span<const double> x) {
        double acc = 0.0;
        for (int k = 0; k < dim; ++k)
            acc += (k == axis) ? mix_logpdf(x[k]) : normal_logpdf(x[k], 0.0, 1.0);
        return acc;
    };
    t.reparam.assign(dim, Reparam::Identity);
    t.analytic_marginal.resize(dim);
    for (int k = 0; k < dim; ++k) {
        AnalyticMarginal am;
        if (k == axis) {
            am.density = [mix_logpdf](double x) { return std::exp(mix_logpdf(x)); };
            am.center = (1.0 - 2.0 * weight) * half;
            am.spread = std::sqrt(1.0 + half * half - am.center * am.center);
        } else {
            am.density = [](double x) { return std::exp(normal_logpdf(x, 0.0, 1.0)); };
            am.center = 0.0;
            am.spread = 1.0;
        }
        check_marginal(am, t.label, k);
        t.analytic_marginal[k] = std::move(am);
    }
    return t;
}

namespace {

// Nelder-Mead minimization with standard coefficients; terminates when the
// simplex diameter falls below 1e-8 relative to its coordinate magnitude.
struct NelderMead {
    const std::function<double(const Eigen::VectorXd&)>& f;
    int dim;

    Eigen::VectorXd minimize(const Eigen::VectorXd& start) {
        const int n = dim;
        std::vector<Eigen::VectorXd> v(n + 1, start);
        std::vector<double> fv(n + 1);
        for (int i = 0; i < n; ++i) v[i + 1](i) += 0.25 * (1.0 + std::abs(start(i)));
        for (int i = 0; i <= n; ++i) fv[i] = f(v[i]);

        constexpr int kMaxIter = 100000;
        for (int iter = 0; iter < kMaxIter; ++iter) {
            // order vertices
            std::vector<int> idx(n + 1);
            for (int i = 0; i <= n; ++i) idx[i] = i;
            std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
            {
                std::vector<Eigen::VectorXd> v2(n + 1);
                std::vector<double> f2(n + 1);
                for (int i = 0; i <= n; ++i) {
                    v2[i] = v[idx[i]];
                    f2[i] = fv[idx[i]];
                }
                v.swap(v2);
                fv.swap(f2);
            }

            double diam = 0.0, mag = 0.0;
            for (int i = 1; i <= n; ++i) diam = std::max(diam, (v[i] - v[0]).cwiseAbs().maxCoeff());
            mag = std::max(1.0, v[0].cwiseAbs().maxCoeff());
            if (diam / mag < 1e-8) return v[0];

            Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
            for (int i = 0; i < n; ++i) centroid += v[i];
            centroid /= n;

            Eigen::VectorXd xr = centroid + (centroid - v[n]);  // reflection
            double fr = f(xr);
            if (fr < fv[0]) {
                Eigen::VectorXd xe = centroid + 2.0 * (xr - centroid);  // expansion
                double fe = f(xe);
                if (fe < fr) {
                    v[n] = xe;
                    fv[n] = fe;
                } else {
                    v[n] = xr;
                    fv[n] = fr;
                }
            } else if (fr < fv[n - 1]) {
                v[n] = xr;
                fv[n] = fr;
            } else {
                bool outside = fr < fv[n];
                Eigen::VectorXd xc = centroid + 0.5 * ((outside ? xr : v[n]) - centroid);
                double fc = f(xc);
                if (fc < (outside ? fr : fv[n])) {
                    v[n] = xc;
                    fv[n] = fc;
                } else {
                    for (int i = 1; i <= n; ++i) {  // shrink
                        v[i] = v[0] + 0.5 * (v[i] - v[0]);
                        fv[i] = f(v[i]);
                    }
                }
            }
        }
        throw ConvergenceError("find_mode_hessian: Nelder-Mead did not converge in 1e5 iterations");
    }
};

}  // namespace

ModeSummary find_mode_hessian(const TargetDensity& t, std::span<const double> start) {
    if (static_cast<int>(start.size()) != t.dim)
        throw std::invalid_argument("find_mode_hessian: start dimension mismatch");
    auto neg_log = [&t](const Eigen::VectorXd& x) {
        double v = t.log_density({x.data(), static_cast<std::size_t>(x.size())});
        return -v;
    };
    Eigen::Map<const Eigen::VectorXd> s0(start.data(), t.dim);
    if (!std::isfinite(neg_log(s0)))
        throw std::invalid_argument("find_mode_hessian: log density not finite at start");

    NelderMead nm{neg_log, t.dim};
    Eigen::VectorXd mode = nm.minimize(s0);

    // central-difference Hessian of -log density
    const int n = t.dim;
    const double croot = std::cbrt(std::numeric_limits<double>::epsilon());
    Eigen::VectorXd h(n);
    for (int k = 0; k < n; ++k) h(k) = croot * (1.0 + std::abs(mode(k)));

    Eigen::MatrixXd H(n, n);
    const double f0 = neg_log(mode);
    for (int k = 0; k < n; ++k) {
        Eigen::VectorXd xp = mode, xm = mode;
        xp(k) += h(k);
        xm(k) -= h(k);
        H(k, k) = (neg_log(xp) - 2.0 * f0 + neg_log(xm)) / (h(k) * h(k));
        for (int l = k + 1; l < n; ++l) {
            Eigen::VectorXd a = mode, b = mode, c = mode, d = mode;
            a(k) += h(k); a(l) += h(l);
            b(k) += h(k); b(l) -= h(l);
            c(k) -= h(k); c(l) += h(l);
            d(k) -= h(k); d(l) -= h(l);
            double v = (neg_log(a) - neg_log(b) - neg_log(c) + neg_log(d)) / (4.0 * h(k) * h(l));
            H(k, l) = H(l, k) = v;
        }
    }

    // regularize to SPD: add delta*I, doubling from 1e-8
    double delta = 0.0;
    Eigen::LLT<Eigen::MatrixXd> llt;
    for (int attempt = 0; attempt <= 60; ++attempt) {
        llt.compute(H + delta * Eigen::MatrixXd::Identity(n, n));
        if (llt.info() == Eigen::Success) break;
        delta = (delta == 0.0) ? 1e-8 : 2.0 * delta;
        if (attempt == 60)
            throw ConvergenceError("find_mode_hessian: Hessian not positive definite after regularization");
    }

    ModeSummary ms;
    ms.mode = mode;
    ms.hessian = H + delta * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd Hinv = llt.solve(Eigen::MatrixXd::Identity(n, n));
    ms.std_devs = Hinv.diagonal().cwiseSqrt();
    return ms;
}

IntegrationRegion build_region(const ModeSummary& ms, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("build_region: need c > 0");
    const auto n = static_cast<int>(ms.mode.size());
    std::vector<double> lo(n), hi(n);
    for (int k = 0; k < n; ++k) {
        lo[k] = ms.mode(k) - c * ms.std_devs(k);
        hi[k] = ms.mode(k) + c * ms.std_devs(k);
    }
    return IntegrationRegion(std::move(lo), std::move(hi));
}

namespace {

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';')) out.push_back(std::stod(item));
    return out;
}

}  // namespace

TargetDensity parse_target(const std::string& spec) {
    auto colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    // comma separates keys, but list values are also comma-separated
    // (shapes=1,2,3): a token without '=' continues the previous value.
    std::vector<std::pair<std::string, std::string>> kv;
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos) {
                if (kv.empty())
                    throw std::invalid_argument("parse_target: expected key=value, got '" + item + "'");
                kv.back().second += ";" + item;
            } else {
                kv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
            }
        }
    }
    auto get = [&kv](const std::string& key) -> const std::string* {
        for (auto& [k, v] : kv)
            if (k == key) return &v;
        return nullptr;
    };
    for (auto& [k, v] : kv) {
        static const char* known[] = {"dim", "mean", "sd", "shapes", "axis", "sep", "w"};
        bool ok = false;
        for (const char* kk : known) ok = ok || k == kk;
        if (!ok) throw std::invalid_argument("parse_target: unknown key '" + k + "'");
    }

    if (name == "gaussian") {
        const std::string* d = get("dim");
        if (!d) throw std::invalid_argument("parse_target: gaussian needs dim=");
        int dim = std::stoi(*d);
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
        Eigen::VectorXd sd = Eigen::VectorXd::Ones(dim);
        if (const std::string* m = get("mean")) {
            auto v = parse_list(*m);
            if (static_cast<int>(v.size()) != dim) throw std::invalid_argument("parse_target: mean length");
            mean = Eigen::Map<Eigen::VectorXd>(v.data(), dim);
        }
        if (const std::string* s = get("sd")) {
            auto v = parse_list(*s);
            if (static_cast<int>(v.size()) != dim) throw std::invalid_argument("parse_target: sd length");
            sd = Eigen::Map<Eigen::VectorXd>(v.data(), dim);
        }
        return make_gaussian(mean, sd.cwiseProduct(sd).asDiagonal());
    }
    if (name == "skewed") {
        const std::string* s = get("shapes");
        if (!s) throw std::invalid_argument("parse_target: skewed needs shapes=");
        auto shapes = parse_list(*s);
        return make_skewed(static_cast<int>(shapes.size()), shapes);
    }
    if (name == "bimodal") {
        const std::string* d = get("dim");
        const std::string* ax = get("axis");
        if (!d || !ax) throw std::invalid_argument("parse_target: bimodal needs dim= and axis=");
        double sep = get("sep") ? std::stod(*get("sep")) : 6.0;
        double w = get("w") ? std::stod(*get("w")) : 0.5;
        // labels use 1-based axis numbering
        return make_bimodal(std::stoi(*d), std::stoi(*ax) - 1, sep, w);
    }
    throw std::invalid_argument("parse_target: unknown target '" + name + "'");
}

}  // namespace latmarg
