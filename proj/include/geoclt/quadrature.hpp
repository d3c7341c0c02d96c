#pragma once

#include "geoclt/core.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace geoclt {

using PointFunction = std::function<double(const Vec&)>;

/// Nodes and weights of an m-point Gauss rule on [-1, 1] for the weight
/// (1-x)^alpha (1+x)^beta, by the Golub-Welsch eigenvalue method.
struct GaussRule {
    Vec nodes;
    Vec weights;
};
GaussRule gauss_jacobi(int m, double alpha, double beta);
inline GaussRule gauss_legendre(int m) { return gauss_jacobi(m, 0.0, 0.0); }

/**
 * Collapsed (conical product) Gauss-Jacobi rule on the k-simplex.
 * Column i of `bary` holds the barycentric coordinates of node i; the
 * weights sum to one, so the integral over a simplex S is vol(S) * sum w f.
 * Exact for polynomials of degree 2m - 1 with m points per direction.
 */
struct SimplexRule {
    int dim = 0;
    int degree = 0;
    Mat bary;
    Vec weights;
};
SimplexRule simplex_rule(int k, int degree);

/// A k-simplex embedded in R^d, vertices as the k+1 columns.
using SimplexCols = Mat;

/// Split a simplex into 2^k children by k rounds of longest-edge bisection.
std::vector<SimplexCols> refine_simplex(const SimplexCols& s);

/// k-volume of an embedded simplex.
double simplex_measure(const SimplexCols& s);

struct RefinedIntegral {
    double value = 0.0;
    double previous = 0.0;
    int level = 0;
};

/// Sum over simplices of the rule, refining all simplices uniformly until
/// |Q_l - Q_{l-1}| <= rel_tol |Q_l|. Throws NumericalError with the last
/// two estimates when max_refine levels do not suffice.
RefinedIntegral integrate_simplices(const std::vector<SimplexCols>& simplices, const PointFunction& f,
                                    int degree, int max_refine, double rel_tol);

/// Quadrature on S^{d-1} with weights summing to one (normalized measure).
struct SphereRule {
    std::vector<Vec> nodes;
    std::vector<double> weights;
};

/**
 * d = 2: uniform angle grid (midpoints). d = 3: stratified equal-area grid in
 * (z, azimuth) with cell centres. d >= 4: Monte Carlo with a fixed seed.
 * A nonzero rotation_seed applies a random rotation to the nodes.
 */
SphereRule sphere_rule(int d, int nodes, std::uint64_t rotation_seed = 0);

/// Normalized spherical average of f. For d = 3 and richardson = true the
/// grid result is extrapolated from node counts N and 4N.
double sphere_average(int d, const std::function<double(const Vec&)>& f, int nodes, bool richardson = false,
                      std::uint64_t rotation_seed = 0);

/// Adaptive Gauss-Kronrod integral of a scalar function on [a, b].
double integrate_interval(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12);

} // namespace geoclt
