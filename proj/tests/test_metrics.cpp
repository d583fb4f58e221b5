#include <doctest.h>

#include <cmath>
#include <limits>

#include "latmarg/metrics.hpp"
#include "test_helpers.hpp"

using namespace latmarg;
using namespace latmarg::testing;

TEST_CASE("Gaussian closed forms") {
    auto p = analytic_marginal_on([](double x) { return normal_pdf(x); }, -8.0, 9.0);
    auto q = analytic_marginal_on([](double x) { return normal_pdf(x, 1.0); }, -8.0, 9.0);
    CHECK(kl_divergence(p, q) == doctest::Approx(0.5).epsilon(2e-3));
    CHECK(std::abs(kl_divergence(p, q) - 0.5) <= 1e-3);
    CHECK(std::abs(hellinger(p, q) - 0.34268) <= 1e-3);
    CHECK(std::abs(hellinger(p, q) - std::sqrt(1.0 - std::exp(-0.125))) <= 1e-3);

    auto wide_p = analytic_marginal_on([](double x) { return normal_pdf(x); }, -20.0, 20.0);
    auto wide_q = analytic_marginal_on([](double x) { return normal_pdf(x, 0.0, 2.0); }, -20.0, 20.0);
    const double want = 0.5 * (0.25 + std::log(4.0) - 1.0);  // 0.31814
    CHECK(std::abs(kl_divergence(wide_p, wide_q) - want) <= 1e-3);
}

TEST_CASE("identical inputs score zero") {
    auto p = analytic_marginal_on([](double x) { return normal_pdf(x); }, -5.0, 5.0);
    CHECK(std::abs(kl_divergence(p, p)) <= 1e-12);
    CHECK(kl_divergence(p, p) >= -1e-12);
    CHECK(std::abs(hellinger(p, p)) <= 1e-6);
}

TEST_CASE("Hellinger is symmetric") {
    auto p = analytic_marginal_on([](double x) { return normal_pdf(x); }, -6.0, 6.0);
    auto q = analytic_marginal_on([](double x) { return normal_pdf(x, 0.7, 1.3); }, -6.0, 6.0);
    CHECK(std::abs(hellinger(p, q) - hellinger(q, p)) <= 1e-12);
    CHECK(hellinger(p, q) >= 0.0);
    CHECK(hellinger(p, q) <= 1.0);
}

TEST_CASE("disjoint supports are an error") {
    auto p = analytic_marginal_on([](double) { return 1.0; }, 0.0, 1.0);
    auto q = analytic_marginal_on([](double) { return 1.0; }, 2.0, 3.0);
    CHECK_THROWS_AS(kl_divergence(p, q), std::invalid_argument);
    CHECK_THROWS_AS(hellinger(p, q), std::invalid_argument);
}

TEST_CASE("vanishing q with positive p diverges") {
    auto p = analytic_marginal_on([](double) { return 0.5; }, 0.0, 2.0);
    auto q = analytic_marginal_on([](double x) { return x <= 1.0 ? 1.0 : 0.0; }, 0.0, 2.0);
    CHECK(kl_divergence(p, q) == std::numeric_limits<double>::infinity());
    CHECK(hellinger(p, q) < 1.0);  // Hellinger stays finite
}

TEST_CASE("grid size stability on smooth inputs") {
    auto p = analytic_marginal_on([](double x) { return normal_pdf(x); }, -7.0, 7.0);
    auto q = analytic_marginal_on([](double x) { return normal_pdf(x, 0.5, 1.1); }, -7.0, 7.0);
    CHECK(std::abs(kl_divergence(p, q, 1001) - kl_divergence(p, q, 2001)) < 1e-4);
    CHECK(std::abs(hellinger(p, q, 1001) - hellinger(p, q, 2001)) < 1e-4);
}

TEST_CASE("report carries the evaluation interval") {
    auto p = analytic_marginal_on([](double x) { return normal_pdf(x); }, -4.0, 9.0);
    auto q = analytic_marginal_on([](double x) { return normal_pdf(x, 1.0); }, -8.0, 5.0);
    DistanceReport r = compare_marginals(p, q, 501);
    CHECK(r.lo == -4.0);
    CHECK(r.hi == 5.0);
    CHECK(r.grid_points == 501);
    CHECK(r.kl >= 0.0);
}
