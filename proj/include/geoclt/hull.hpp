#pragma once

#include "geoclt/polytope.hpp"

#include <optional>
#include <vector>

namespace geoclt {

/// Closed half-space {x : <normal, x> <= offset}; normal need not be unit.
struct Halfspace {
    Vec normal;
    double offset = 0.0;
};

/// Raw hull output in terms of input point indices.
struct HullResult {
    int dim = 0;
    std::vector<int> vertex_ids;   ///< Extreme input points, ascending.
    std::vector<Facet> facets;     ///< Merged facets; vertex lists hold input indices.
    std::vector<Cell> boundary;    ///< Simplicial boundary cells (d indices each).
};

/// Triangulation of a polytope into d-simplices over its own point list.
struct Triangulation {
    int dim = 0;
    std::vector<Vec> points;
    std::vector<Cell> simplices;

    /// Sum of unsigned simplex volumes.
    double volume() const;
};

/// Unsigned k-volume of the simplex spanned by k+1 points in R^d.
double simplex_volume(const std::vector<Vec>& pts, const Cell& cell);

/// Incremental beneath-beyond hull (farthest-point insertion with conflict
/// lists). Points within tolerance of a facet are absorbed. Supports 2 <= d <= 6.
/// Throws DomainError for fewer than d+1 points or lower-dimensional input
/// (the message carries the detected affine rank).
HullResult hull_indices(const std::vector<Vec>& points, int dim);

Polytope convex_hull(const std::vector<Vec>& points, int dim);

/// conv(points U vertices(T)).
Polytope hull_with_body(const std::vector<Vec>& points, const Polytope& T);

/// Bounded polytope window  ∩  (∩ halfspaces), via polar duality around an
/// interior point. If `interior` is not given, the origin is tried, then the
/// window's vertex centroid.
Polytope halfspace_intersection(const std::vector<Halfspace>& halfspaces, const Polytope& window,
                                std::optional<Vec> interior = std::nullopt);

/// (d-1)-simplices (indices into P.vertices()) triangulating facet `facet`.
std::vector<Cell> facet_cells(const Polytope& P, std::size_t facet);

/// (d-1)-volume of a facet.
double facet_area(const Polytope& P, std::size_t facet);

/// Volume by the divergence theorem, (1/d) sum_i b_i area(F_i).
double polytope_volume(const Polytope& P);

/// Cone every facet's fan triangulation to the vertex centroid. A polytope
/// with exactly d+1 vertices is returned as a single simplex.
Triangulation triangulate(const Polytope& P);

} // namespace geoclt
