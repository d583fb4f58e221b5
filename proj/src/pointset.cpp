#include "latmarg/pointset.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "latmarg/errors.hpp"
#include "latmarg/numeric.hpp"

namespace latmarg {

IntegrationRegion::IntegrationRegion(std::vector<double> lo, std::vector<double> hi)
    : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.empty() || lower.size() != upper.size())
        throw std::invalid_argument("IntegrationRegion: mismatched bounds");
    for (std::size_t k = 0; k < lower.size(); ++k)
        if (!(lower[k] < upper[k]))
            throw std::invalid_argument("IntegrationRegion: need lower < upper on axis " + std::to_string(k));
}

namespace {

std::int64_t checked_pow(int n, int s, std::int64_t budget) {
    std::int64_t total = 1;
    for (int j = 0; j < s; ++j) {
        if (total > budget / n)
            throw BudgetError("grid size " + std::to_string(n) + "^" + std::to_string(s) +
                              " exceeds point budget " + std::to_string(budget));
        total *= n;
    }
    return total;
}

}  // namespace

PointSet generate_grid(int n, int s, std::int64_t budget) {
    if (n < 2) throw std::invalid_argument("generate_grid: need n >= 2");
    if (s < 1) throw std::invalid_argument("generate_grid: need s >= 1");
    const std::int64_t total = checked_pow(n, s, budget);

    PointSet ps;
    ps.kind = PointSetKind::Grid;
    ps.dim = s;
    ps.n_points = total;
    ps.n_per_axis = n;
    ps.coords.resize(static_cast<std::size_t>(total) * s);

    std::vector<int> g(s, 0);  // odometer, last axis fastest
    for (std::int64_t i = 0; i < total; ++i) {
        for (int j = 0; j < s; ++j)
            ps.coords[static_cast<std::size_t>(i) * s + j] = static_cast<double>(g[j]) / n;
        for (int j = s - 1; j >= 0; --j) {
            if (++g[j] < n) break;
            g[j] = 0;
        }
    }
    return ps;
}

PointSet generate_korobov(std::int64_t n_points, int s, std::int64_t alpha,
                          bool extensible, std::int64_t budget) {
    if (n_points < 2) throw std::invalid_argument("generate_korobov: need N >= 2");
    if (s < 1) throw std::invalid_argument("generate_korobov: need s >= 1");
    if (alpha < 1 || alpha > n_points - 1)
        throw std::invalid_argument("generate_korobov: alpha must lie in [1, N-1]");
    if (n_points > budget)
        throw BudgetError("lattice size exceeds point budget " + std::to_string(budget));
    // (i * alpha^j mod N) products must stay below 2^63 for exact arithmetic
    if (n_points > 3'037'000'499LL)
        throw std::invalid_argument("generate_korobov: N too large for exact 64-bit modular arithmetic");

    PointSet ps;
    ps.kind = extensible ? PointSetKind::ExtensibleKorobov : PointSetKind::Korobov;
    ps.dim = s;
    ps.n_points = n_points;
    ps.alpha = alpha;
    ps.coprime = std::gcd(alpha, n_points) == 1;
    ps.coords.resize(static_cast<std::size_t>(n_points) * s);

    const auto N = static_cast<std::uint64_t>(n_points);
    std::uint64_t apow = 1 % N;  // alpha^(j-1) mod N
    for (int j = 0; j < s; ++j) {
        for (std::uint64_t i = 0; i < N; ++i) {
            std::uint64_t r = (i * apow) % N;  // fits: N <= 1e7 so i*apow < 1e14
            ps.coords[static_cast<std::size_t>(i) * s + j] =
                static_cast<double>(r) / static_cast<double>(N);
        }
        apow = (apow * static_cast<std::uint64_t>(alpha)) % N;
    }
    return ps;
}

PointSet thin_lattice(const PointSet& ps, int halvings) {
    if (ps.kind == PointSetKind::Grid)
        throw std::invalid_argument("thin_lattice: point set must be a Korobov lattice");
    if (halvings < 1) throw std::invalid_argument("thin_lattice: need halvings >= 1");
    std::int64_t step = 1;
    for (int h = 0; h < halvings; ++h) {
        step *= 2;
        if (ps.n_points % step != 0)
            throw std::invalid_argument("thin_lattice: N not divisible by 2^halvings");
    }

    PointSet out;
    out.kind = ps.kind;
    out.dim = ps.dim;
    out.n_points = ps.n_points / step;
    out.alpha = out.n_points > 1 ? ps.alpha % out.n_points : 0;
    out.coprime = out.n_points > 1 ? std::gcd(out.alpha, out.n_points) == 1 : true;
    out.region = ps.region;
    out.coords.reserve(static_cast<std::size_t>(out.n_points) * ps.dim);
    for (std::int64_t i = 0; i < ps.n_points; i += step) {
        auto row = ps.point(i);
        out.coords.insert(out.coords.end(), row.begin(), row.end());
    }
    return out;
}

double p2_merit(std::int64_t n_points, int s, std::int64_t alpha) {
    const PointSet ps = generate_korobov(n_points, s, alpha);
    const double two_pi_sq = 2.0 * std::numbers::pi * std::numbers::pi;
    KahanSum acc;
    for (std::int64_t i = 0; i < ps.n_points; ++i) {
        double prod = 1.0;
        for (int j = 0; j < s; ++j) {
            double x = ps.coord(i, j);
            prod *= 1.0 + two_pi_sq * (x * x - x + 1.0 / 6.0);  // Bernoulli B2
        }
        acc.add(prod);
    }
    return -1.0 + acc.value() / static_cast<double>(n_points);
}

std::int64_t search_generating_constant(std::int64_t n_points, int s) {
    if (n_points < 4) throw std::invalid_argument("search_generating_constant: need N >= 4");
    if (s < 1) throw std::invalid_argument("search_generating_constant: need s >= 1");
    std::int64_t best_alpha = -1;
    double best_merit = 0.0;
    for (std::int64_t a = 1; a < n_points; ++a) {
        if (std::gcd(a, n_points) != 1) continue;
        double m = p2_merit(n_points, s, a);
        if (best_alpha < 0 || m < best_merit) {
            best_alpha = a;
            best_merit = m;
        }
    }
    return best_alpha;
}

PointSet scale_to_region(const PointSet& ps, const IntegrationRegion& region) {
    if (ps.region.has_value())
        throw std::invalid_argument("scale_to_region: point set already scaled");
    if (region.dim() != ps.dim)
        throw std::invalid_argument("scale_to_region: dimension mismatch");
    PointSet out = ps;
    out.region = region;
    for (std::int64_t i = 0; i < ps.n_points; ++i)
        for (int k = 0; k < ps.dim; ++k) {
            auto idx = static_cast<std::size_t>(i) * ps.dim + k;
            out.coords[idx] = region.lower[k] + region.width(k) * ps.coords[idx];
        }
    return out;
}

PointSet scale_to_unit(const PointSet& ps) {
    if (!ps.region.has_value())
        throw std::invalid_argument("scale_to_unit: point set is not scaled");
    const IntegrationRegion& region = *ps.region;
    PointSet out = ps;
    out.region.reset();
    for (std::int64_t i = 0; i < ps.n_points; ++i)
        for (int k = 0; k < ps.dim; ++k) {
            auto idx = static_cast<std::size_t>(i) * ps.dim + k;
            out.coords[idx] = (ps.coords[idx] - region.lower[k]) / region.width(k);
        }
    return out;
}

}  // namespace latmarg
