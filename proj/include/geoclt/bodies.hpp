#pragma once

#include "geoclt/core.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <utility>

namespace geoclt {

enum class BodyKind { Ball, Ellipsoid, PerturbedBall };

/// A point of the boundary of a C2+ body, addressed by its outer unit normal.
struct BoundaryPoint {
    Vec x;
    Vec normal;
    double curvature = 0.0;     ///< Gauss-Kronecker curvature at x.
    double area_jacobian = 0.0; ///< dH^{d-1}(x) / dS(normal), reciprocal of the curvature.
};

/**
 * Smooth convex body of class C2+ given by its support function.
 *
 * The origin is an interior point (h > 0). Built-in shapes:
 *   - ball of radius R centred at c (|c| < R),
 *   - axis-aligned ellipsoid centred at the origin,
 *   - perturbed ball h(u) = R (1 + eps * s(u)), s(u) = u1^3 - 3 u1 u2^2 (a cubic
 *     spherical harmonic); eps is validated against the C2+ condition on a
 *     direction grid at construction.
 *
 * Derivatives refer to the 1-homogeneous extension of h to R^d, so that
 * grad_h(u) is the reverse Gauss map and hess_h(u) restricted to u^perp equals
 * the spherical Hessian plus h(u) times the identity.
 */
class SupportBody {
  public:
    static SupportBody ball(int dim, double radius, std::optional<Vec> center = std::nullopt);
    static SupportBody ellipsoid(const Vec& semi_axes);
    static SupportBody perturbed_ball(int dim, double radius, double epsilon);

    /// {"kind": "ball"|"ellipsoid"|"perturbed_ball", ...}; see README for fields.
    static SupportBody from_json(const nlohmann::json& spec);
    nlohmann::json to_json() const;

    int dim() const { return dim_; }
    BodyKind kind() const { return kind_; }
    const std::string& label() const { return label_; }

    double h(const Vec& y) const;
    Vec grad_h(const Vec& y) const;
    Mat hess_h(const Vec& y) const;

    /// (d-1) x (d-1) spherical Hessian of h at unit u in the frame tangent_frame(u).
    Mat spherical_hessian(const Vec& u) const;

    /// hess_h + h I on u^perp, i.e. the matrix whose determinant is the area Jacobian.
    Mat curvature_matrix(const Vec& u) const;

    /// Radial function rho_K(w) for a unit vector w.
    double radial(const Vec& w) const;

    /// Membership test; slack > 0 enlarges the body relatively.
    bool contains(const Vec& x, double slack = 0.0) const;

    /// Exit parameters (t_plus, t_minus) of the line x + t v from the body,
    /// in closed form for balls and ellipsoids; nullopt otherwise.
    std::optional<std::pair<double, double>> ray_exits(const Vec& x, const Vec& v) const;

    /// Radius of the largest origin-centred ball inside the body.
    double inradius() const;

    /// Coordinate bounding box [lo, hi].
    std::pair<Vec, Vec> bounding_box() const;

    /// Sample directions used for validation and grid-based checks.
    static std::vector<Vec> check_directions(int dim, int count);

  private:
    SupportBody() = default;
    void validate() const;

    int dim_ = 0;
    BodyKind kind_ = BodyKind::Ball;
    std::string label_;
    double radius_ = 1.0;
    Vec center_;
    Vec axes_;
    double epsilon_ = 0.0;
};

/// Reverse Gauss map: boundary point with outer normal u.
/// Throws InputError for non-unit u and ModelError where the body is not C2+.
BoundaryPoint boundary_point_from_normal(const SupportBody& body, const Vec& u);

/// Legendre transform x -> u / h(u) onto the boundary of the polar body.
Vec legendre_transform(const SupportBody& body, const BoundaryPoint& p);

} // namespace geoclt
