#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace latmarg {

enum class PointSetKind { Grid, Korobov, ExtensibleKorobov };

// Rectangular integration region [a, b): lower[k] <= x < upper[k] per axis.
struct IntegrationRegion {
    std::vector<double> lower, upper;

    IntegrationRegion(std::vector<double> lo, std::vector<double> hi);
    int dim() const { return static_cast<int>(lower.size()); }
    double width(int k) const { return upper[k] - lower[k]; }
};

// Deterministic point set in [0,1)^s, or affinely mapped into a region.
// Korobov coordinates are produced by exact modular integer arithmetic and a
// single correctly-rounded division, so subset and equality tests on the
// stored doubles are exact.
struct PointSet {
    PointSetKind kind = PointSetKind::Grid;
    int dim = 0;                            // s
    std::int64_t n_points = 0;              // N
    int n_per_axis = 0;                     // Grid: N = n_per_axis^dim
    std::int64_t alpha = 0;                 // Korobov generating constant
    bool coprime = true;                    // gcd(alpha, N) == 1; projection regularity holds
    std::optional<IntegrationRegion> region;  // engaged after scale_to_region
    std::vector<double> coords;             // row-major, n_points x dim

    double coord(std::int64_t i, int k) const { return coords[static_cast<std::size_t>(i) * dim + k]; }
    std::span<const double> point(std::int64_t i) const {
        return {coords.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)};
    }
};

inline constexpr std::int64_t kDefaultPointBudget = 10'000'000;

// n^s points (g1/n, ..., gs/n) in lexicographic order of (g1,...,gs).
PointSet generate_grid(int n, int s, std::int64_t budget = kDefaultPointBudget);

// N points, point i (1-based) has coordinate j equal to ((i-1)*alpha^(j-1) mod N)/N.
// A non-coprime alpha is accepted but clears the coprime flag.
PointSet generate_korobov(std::int64_t n_points, int s, std::int64_t alpha,
                          bool extensible = false, std::int64_t budget = kDefaultPointBudget);

// Keeps indices 1, 1+2^h, 1+2*2^h, ...; the result equals the directly
// generated lattice with N/2^h points and constant alpha mod (N/2^h).
PointSet thin_lattice(const PointSet& ps, int halvings);

// Equal-weight P2 figure of merit of the Korobov lattice K_{N,s,alpha}.
double p2_merit(std::int64_t n_points, int s, std::int64_t alpha);

// Exhaustive search for the coprime alpha in [1, N-1] minimizing p2_merit;
// ties broken by the smallest alpha. O(N^2 * s).
std::int64_t search_generating_constant(std::int64_t n_points, int s);

// Coordinate-wise affine map u = a + (b-a)x of a unit-cube point set.
PointSet scale_to_region(const PointSet& ps, const IntegrationRegion& region);

// Inverse of scale_to_region (1 ulp round trip per coordinate).
PointSet scale_to_unit(const PointSet& ps);

}  // namespace latmarg
