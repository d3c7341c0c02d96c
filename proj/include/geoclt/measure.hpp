#pragma once

#include "geoclt/hull.hpp"
#include "geoclt/quadrature.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>

namespace geoclt {

/// How spherical integrals over polytopes are evaluated.
///   Exact: facet decomposition (dual volumes) or closed forms in d = 2, 3
///          (mean width); falls back to the grid in d >= 4.
///   Grid:  sphere_rule() nodes of the direction sphere.
enum class SphereMethod { Exact, Grid };

struct QuadratureSpec {
    int sphere_nodes = 4096;
    int simplex_degree = 15;
    int max_refine = 4;
    double rel_tol = 1e-11;
    SphereMethod sphere_method = SphereMethod::Exact;
    bool richardson = true;          ///< d = 3 grid only.
    std::uint64_t rotation_seed = 0; ///< 0 = unrotated grid.

    /// Throws ConfigError unless all fields are positive and rel_tol < 1.
    void validate() const;

    nlohmann::json to_json() const;
    static QuadratureSpec from_json(const nlohmann::json& j);
};

struct Constants {
    int d = 0;
    double kappa_d = 0.0;
    double C_d = 0.0;

    static Constants of(int d) { return {d, kappa(d), width_constant(d)}; }
};

/// Phi(P) = integral of phi over P, by simplex quadrature on triangulate(P).
double weighted_volume(const Polytope& P, const PointFunction& phi, const QuadratureSpec& q);

/// Dual volume kappa_d * (normalized spherical mean of rho_P^j). Needs the
/// origin in the interior of P.
double dual_volume(const Polytope& P, double j, const QuadratureSpec& q);

/// Same, always on the direction grid (cross-check route).
double dual_volume_grid(const Polytope& P, double j, const QuadratureSpec& q);

/// Complement form (|j|/d) * integral over R^d \ P of |x|^(j-d), valid for j < 0.
/// Radial quadrature in d = 2 only; used as an independent check.
double dual_volume_complement(const Polytope& P, double j, const QuadratureSpec& q);

/// Mean width: normalized spherical mean of h_P(u) + h_P(-u).
double mean_width(const Polytope& P, const QuadratureSpec& q);

/// Same, always on the direction grid.
double mean_width_grid(const Polytope& P, const QuadratureSpec& q);

/// W(P cap L) = C_d * dual_volume(conv(P* cup L*), -1).
double mean_width_dual(const Polytope& P, const Polytope& L, const QuadratureSpec& q);

/// Same with P given by half-spaces whose intersection contains the origin in its interior.
double mean_width_dual(const std::vector<Halfspace>& P, const Polytope& L, const QuadratureSpec& q);

} // namespace geoclt
