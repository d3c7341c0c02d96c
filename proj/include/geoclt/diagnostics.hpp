#pragma once

#include "geoclt/hull.hpp"
#include "geoclt/sampling.hpp"

#include <functional>
#include <vector>

namespace geoclt {

/// Monte Carlo estimate with its standard error.
struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;
    long samples = 0;
};

/// sigma of the boundary cap {x in bd K : <x, u> >= s}, as a probability.
/// The cap is taken to be star-shaped around u in normal space.
double cap_measure(const SupportBody& K, const GeometryWeights& w, const Vec& u, double s);

/// Grid outer approximation of the weighted surface body K_sigma^t.
struct SurfaceBodyApprox {
    double t = 0.0;
    std::vector<Vec> directions;
    std::vector<double> offsets;    ///< s(u) with cap_measure(u, s(u)) = t.
    std::vector<double> cap_angles; ///< Angle in normal space from u to the cap rim (max over the rim).
    Polytope polytope;
};

/// Default direction grid: d = 2: max(720, 8/t); d = 3: max(2562, 8/t^2) rounded.
int default_surface_grid(int d, double t);

/// Per-direction root finding of cap_measure = t, then half-space intersection.
/// grid_size <= 0 uses default_surface_grid. Throws DomainError for t >= 1/2,
/// d outside {2, 3}, or a failed root bracket.
SurfaceBodyApprox surface_body(const SupportBody& K, const GeometryWeights& w, double t, int grid_size = 0);

/// Indices of the grid caps {x in K : <x, u> >= s(u)} containing z.
std::vector<int> caps_containing(const SurfaceBodyApprox& sb, const Vec& z);

/// Does the segment [a, b] meet the polytope? (Cyrus-Beck clipping; touching counts.)
bool segment_hits_polytope(const Vec& a, const Vec& b, const Polytope& P, const std::vector<int>& facets);

/**
 * Monte Carlo estimate of Phi(Vis(z, t)). Proposals are uniform in the
 * bounding box of the union of grid caps containing z; y is accepted when
 * y in K, y outside the surface-body polytope, and [z, y] misses the polytope.
 * If `accepted` is non-null the accepted points are appended to it. Zero
 * accepted proposals is a NumericalError.
 */
Estimate visibility_measure(const SupportBody& K, const std::function<double(const Vec&)>& phi,
                            const SurfaceBodyApprox& sb, const BoundaryPoint& z, long mc_budget, SeedStream& stream,
                            std::vector<Vec>* accepted = nullptr);

/// Do Vis(z, t) and Vis(y, t) intersect? Exact for the grid caps: two caps
/// meet iff min over mu in [0,1] of h_K(mu u1 + (1-mu) u2) - mu s1 - (1-mu) s2 >= 0.
bool visibility_overlaps(const SupportBody& K, const SurfaceBodyApprox& sb, const Vec& z, const Vec& y);

/// sigma{y : Vis(z, t) meets Vis(y, t)}. d = 2: arc endpoints by bisection in
/// the normal angle; d = 3: Monte Carlo over sigma with mc_budget draws.
Estimate overlap_measure(const SupportBody& K, const GeometryWeights& w, const SurfaceBodyApprox& sb,
                         const BoundaryPoint& z, long mc_budget, SeedStream& stream);

/// Fraction of replications in which a vertex of the tau-surface body polytope
/// (tau = c log n / n) lies outside the hull of n sigma-points.
Estimate containment_probability(const SupportBody& K, const GeometryWeights& w, int n, double c, int reps,
                                 const SeedStream& stream, int grid_size = 0);

/// Symmetric functional of a point set (e.g. weighted volume of the hull).
using SetFunctional = std::function<double(const std::vector<Vec>&)>;

struct DifferenceStats {
    int n = 0;
    int rep_count = 0;
    double B3_hat = 0.0;  ///< Mean of |D_1 f|^4.
    double B3_stderr = 0.0;
    double D1_mean_abs = 0.0;
    double D12_nonzero_rate = 0.0;
    double D12_stderr = 0.0;
};

/// Per replication: f on n sigma-points, with point 1, point 2, and both removed.
/// D_{1,2} f counts as nonzero when |D_{1,2} f| > zero_tol * |f|.
DifferenceStats difference_moments(const SupportBody& K, const GeometryWeights& w, const SetFunctional& f, int n,
                                   int reps, const SeedStream& stream, double zero_tol = 1e-12);

} // namespace geoclt
