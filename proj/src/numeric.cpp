#include "latmarg/numeric.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "latmarg/errors.hpp"

namespace latmarg {

double simpson(const std::function<double(double)>& f, double a, double b, int nodes) {
    if (nodes < 3 || nodes % 2 == 0) throw std::invalid_argument("simpson: nodes must be odd and >= 3");
    if (!(a < b)) throw std::invalid_argument("simpson: need a < b");
    const double h = (b - a) / (nodes - 1);
    KahanSum acc;
    acc.add(f(a));
    acc.add(f(b));
    for (int i = 1; i < nodes - 1; ++i) {
        double w = (i % 2 == 1) ? 4.0 : 2.0;
        acc.add(w * f(a + h * i));
    }
    return acc.value() * h / 3.0;
}

CubicSpline::CubicSpline(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    const std::size_t n = xs_.size();
    if (n < 2 || ys_.size() != n) throw std::invalid_argument("CubicSpline: need >= 2 matching knots");
    for (std::size_t i = 1; i < n; ++i)
        if (!(xs_[i] > xs_[i - 1])) throw std::invalid_argument("CubicSpline: knots must increase");

    y2_.assign(n, 0.0);
    if (n == 2) return;  // natural spline through 2 points is the chord

    // Tridiagonal solve for second derivatives, natural boundary (y2 = 0 at ends).
    std::vector<double> u(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double sig = (xs_[i] - xs_[i - 1]) / (xs_[i + 1] - xs_[i - 1]);
        double p = sig * y2_[i - 1] + 2.0;
        y2_[i] = (sig - 1.0) / p;
        u[i] = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]) -
               (ys_[i] - ys_[i - 1]) / (xs_[i] - xs_[i - 1]);
        u[i] = (6.0 * u[i] / (xs_[i + 1] - xs_[i - 1]) - sig * u[i - 1]) / p;
    }
    for (std::size_t k = n - 1; k-- > 1;) y2_[k] = y2_[k] * y2_[k + 1] + u[k];
    y2_[0] = y2_[n - 1] = 0.0;
}

double CubicSpline::operator()(double x) const {
    const std::size_t n = xs_.size();
    if (n == 2) {
        double t = (x - xs_[0]) / (xs_[1] - xs_[0]);
        return ys_[0] + t * (ys_[1] - ys_[0]);
    }
    // locate interval; clamp so out-of-range x uses the boundary piece
    std::size_t hi = std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin();
    hi = std::clamp<std::size_t>(hi, 1, n - 1);
    std::size_t lo = hi - 1;
    double h = xs_[hi] - xs_[lo];
    double a = (xs_[hi] - x) / h;
    double b = (x - xs_[lo]) / h;
    return a * ys_[lo] + b * ys_[hi] +
           ((a * a * a - a) * y2_[lo] + (b * b * b - b) * y2_[hi]) * h * h / 6.0;
}

std::vector<double> polyfit_scaled(std::span<const double> xs, std::span<const double> ys,
                                   int degree, double lo, double hi) {
    if (degree < 0) throw std::invalid_argument("polyfit_scaled: negative degree");
    if (xs.size() != ys.size()) throw std::invalid_argument("polyfit_scaled: size mismatch");
    const auto m = static_cast<Eigen::Index>(xs.size());
    const Eigen::Index cols = degree + 1;
    if (m < cols) throw FitError("polyfit_scaled: fewer points than coefficients");

    Eigen::MatrixXd design(m, cols);
    Eigen::VectorXd rhs(m);
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (Eigen::Index i = 0; i < m; ++i) {
        double t = (xs[i] - mid) / half;
        double p = 1.0;
        for (Eigen::Index j = 0; j < cols; ++j) {
            design(i, j) = p;
            p *= t;
        }
        rhs(i) = ys[i];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < cols) throw FitError("polyfit_scaled: rank-deficient design matrix");
    Eigen::VectorXd c = qr.solve(rhs);
    return {c.data(), c.data() + c.size()};
}

double polyval_scaled(std::span<const double> coeffs, double x, double lo, double hi) {
    const double t = (2.0 * x - (lo + hi)) / (hi - lo);
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * t + coeffs[i];
    return acc;
}

std::vector<double> poly_to_monomial(std::span<const double> coeffs, double lo, double hi) {
    // t = s*x + o with s = 2/(hi-lo), o = -(lo+hi)/(hi-lo); expand by Horner on (s*x + o).
    const double s = 2.0 / (hi - lo);
    const double o = -(lo + hi) / (hi - lo);
    std::vector<double> out{0.0};
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        // out = out * (s*x + o) + c_i
        std::vector<double> next(out.size() + 1, 0.0);
        for (std::size_t j = 0; j < out.size(); ++j) {
            next[j] += out[j] * o;
            next[j + 1] += out[j] * s;
        }
        next[0] += coeffs[i];
        out = std::move(next);
    }
    out.resize(coeffs.empty() ? 1 : coeffs.size());
    return out;
}

double trigamma(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("trigamma: x must be positive");
    double acc = 0.0;
    while (x < 10.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    // asymptotic series at large x
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    return acc + inv * (1.0 + inv * (0.5 + inv * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 / 42.0))));
}

int worker_count() {
    if (const char* env = std::getenv("LATMARG_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return std::min(v, 256);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 64u));
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const int workers = worker_count();
    if (workers <= 1 || n < 256) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::mutex mu;
    std::exception_ptr first_error;
    auto run_chunk = [&](std::size_t from, std::size_t to) {
        try {
            for (std::size_t i = from; i < to; ++i) fn(i);
        } catch (...) {
            std::lock_guard lock(mu);
            if (!first_error) first_error = std::current_exception();
        }
    };
    const std::size_t nthreads = std::min<std::size_t>(workers, n);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    const std::size_t chunk = (n + nthreads - 1) / nthreads;
    for (std::size_t t = 0; t < nthreads; ++t) {
        std::size_t from = t * chunk;
        std::size_t to = std::min(n, from + chunk);
        if (from >= to) break;
        pool.emplace_back(run_chunk, from, to);
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace latmarg
