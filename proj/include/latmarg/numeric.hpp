#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace latmarg {

// Compensated (Kahan) accumulator. Used wherever a sum must not depend on
// platform-specific vectorization of a naive loop.
class KahanSum {
  public:
    void add(double x) {
        double y = x - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Composite Simpson quadrature on [a, b] with a fixed odd node count.
double simpson(const std::function<double(double)>& f, double a, double b, int nodes = 1001);

// Natural cubic spline through strictly increasing knots. Evaluation outside
// the knot range uses the boundary cubic piece.
class CubicSpline {
  public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> xs, std::vector<double> ys);

    double operator()(double x) const;

    const std::vector<double>& knots() const { return xs_; }
    const std::vector<double>& values() const { return ys_; }

  private:
    std::vector<double> xs_, ys_, y2_;  // y2_: second derivatives at knots
};

// Least-squares polynomial fit of degree d in the centered-scaled variable
// t = (2x - (lo+hi)) / (hi - lo), solved by column-pivoted Householder QR.
// Returns coefficients c0..cd in the t basis. Throws FitError if the design
// matrix is rank deficient.
std::vector<double> polyfit_scaled(std::span<const double> xs, std::span<const double> ys,
                                   int degree, double lo, double hi);

// Horner evaluation of t-basis coefficients at x in [lo, hi].
double polyval_scaled(std::span<const double> coeffs, double x, double lo, double hi);

// Expand t-basis coefficients into monomial coefficients of the unscaled variable.
std::vector<double> poly_to_monomial(std::span<const double> coeffs, double lo, double hi);

// Trigamma function psi'(x) for x > 0 (recurrence + asymptotic series).
double trigamma(double x);

// Worker cap for parallel evaluation, from env LATMARG_THREADS (default:
// hardware concurrency).
int worker_count();

// Runs fn(i) for i in [0, n), chunked over worker_count() threads. fn must
// only touch slot i of any shared output.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace latmarg
