#pragma once

#include "geoclt/core.hpp"

#include <nlohmann/json.hpp>

#include <vector>

namespace geoclt {

/// Supporting hyperplane {x : <normal, x> = offset} of a facet, with the
/// indices of the polytope vertices lying on it.
struct Facet {
    Vec normal;
    double offset = 0.0;
    std::vector<int> vertices;
};

/// A (d-1)-dimensional cell of a triangulated facet boundary, or a d-simplex;
/// indices refer to the owning point list.
using Cell = std::vector<int>;

/**
 * Convex polytope carried in both vertex and facet representation.
 *
 * Construction checks unit facet normals, that every facet carries at least
 * d affinely independent vertices, and that each listed incidence is tight.
 * validate() additionally checks every vertex against every facet.
 */
class Polytope {
  public:
    Polytope() = default;
    Polytope(int dim, std::vector<Vec> vertices, std::vector<Facet> facets);

    int dim() const { return dim_; }
    const std::vector<Vec>& vertices() const { return vertices_; }
    const std::vector<Facet>& facets() const { return facets_; }
    bool contains_origin() const { return contains_origin_; }
    bool empty() const { return vertices_.empty(); }

    /// Full O(V * F) check that every vertex satisfies every facet inequality;
    /// throws DomainError on violation. The constructor only checks incidences.
    void validate() const;

    /// All facet inequalities hold with slack `tol` (relative to the facet offset scale).
    bool contains(const Vec& x, double tol) const;
    bool contains(const Vec& x) const { return contains(x, tolerance()); }

    /// Facet indices incident to each vertex.
    std::vector<std::vector<int>> vertex_facets() const;

    /// Arithmetic mean of the vertices.
    Vec vertex_centroid() const;

    /// Same polytope shifted by `shift`.
    Polytope translated(const Vec& shift) const;

    /// Same polytope scaled about the origin by lambda > 0.
    Polytope scaled(double lambda) const;

    /// {"dim", "vertices": [[...]], "facets": [{"normal", "offset", "vertices"}]}
    nlohmann::json to_json() const;
    static Polytope from_json(const nlohmann::json& j);

  private:
    int dim_ = 0;
    std::vector<Vec> vertices_;
    std::vector<Facet> facets_;
    bool contains_origin_ = false;
};

/// Polar body {y : <x, y> <= 1 for all x in P}. Needs the origin in the interior.
Polytope polar_polytope(const Polytope& P);

/// rho_P(u) = max{r > 0 : r u in P} for unit u.
double radial_function(const Polytope& P, const Vec& u);

/// h_P(u) = max over vertices of <v, u>.
double support_function(const Polytope& P, const Vec& u);

/// Axis-aligned box as a polytope.
Polytope box_polytope(const Vec& lo, const Vec& hi);

/// Cross-polytope conv{+-r e_i}.
Polytope cross_polytope(int dim, double r);

/// Hausdorff distance between two finite point sets.
double point_set_hausdorff(const std::vector<Vec>& a, const std::vector<Vec>& b);

} // namespace geoclt
