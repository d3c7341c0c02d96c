#include "geoclt/bodies.hpp"
#include "geoclt/hull.hpp"
#include "geoclt/polytope.hpp"
#include "geoclt/rng.hpp"

#include <doctest.h>

using namespace geoclt;

namespace {

Vec random_unit(int d, SeedStream& s)
{
    Vec v(d);
    for (int k = 0; k < d; ++k)
        v(k) = s.normal();
    return v.normalized();
}

std::vector<SupportBody> test_bodies()
{
    return {SupportBody::ball(2, 1.3), SupportBody::ball(3, 0.7), SupportBody::ellipsoid(Vec{{2.0, 1.0}}),
            SupportBody::ellipsoid(Vec{{1.0, 0.6, 0.8}}), SupportBody::perturbed_ball(2, 1.0, 0.05),
            SupportBody::perturbed_ball(3, 1.0, 0.05)};
}

} // namespace

TEST_CASE("ball boundary points")
{
    const double R = 1.7;
    for (int d = 2; d <= 4; ++d) {
        const SupportBody B = SupportBody::ball(d, R);
        SeedStream s(d);
        const Vec u = random_unit(d, s);
        const BoundaryPoint p = boundary_point_from_normal(B, u);
        CHECK((p.x - R * u).norm() < 1e-14);
        CHECK(p.curvature == doctest::Approx(std::pow(R, -(d - 1))).epsilon(1e-13));
        CHECK(p.curvature * p.area_jacobian == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("ellipsoid axis point and finite-difference curvature")
{
    const SupportBody E = SupportBody::ellipsoid(Vec{{2.0, 1.0}});
    const BoundaryPoint p = boundary_point_from_normal(E, Vec{{1.0, 0.0}});
    CHECK((p.x - Vec{{2.0, 0.0}}).norm() < 1e-14);
    // Curvature of a plane curve = d(normal angle) / d(arc length), by central differences.
    SeedStream s(5);
    for (int rep = 0; rep < 10; ++rep) {
        const double a = s.uniform(0.0, 2.0 * std::numbers::pi);
        const double h = 1e-5;
        const Vec u0{{std::cos(a - h), std::sin(a - h)}};
        const Vec u1{{std::cos(a + h), std::sin(a + h)}};
        const double ds = (E.grad_h(u1) - E.grad_h(u0)).norm();
        const BoundaryPoint q = boundary_point_from_normal(E, Vec{{std::cos(a), std::sin(a)}});
        CHECK(q.curvature == doctest::Approx(2.0 * h / ds).epsilon(1e-7));
    }
}

TEST_CASE("support-function invariants on every built-in body")
{
    for (const SupportBody& K : test_bodies()) {
        const int d = K.dim();
        SeedStream s(11 + d);
        for (int rep = 0; rep < 200; ++rep) {
            const Vec u = random_unit(d, s);
            CHECK(K.h(u) > 0.0);
            const BoundaryPoint p = boundary_point_from_normal(K, u);
            CHECK(p.x.dot(u) == doctest::Approx(K.h(u)).epsilon(1e-13));
            CHECK((p.normal - u).norm() < 1e-10);
            CHECK(p.curvature * p.area_jacobian == doctest::Approx(1.0).epsilon(1e-14));
            const Eigen::SelfAdjointEigenSolver<Mat> es(K.curvature_matrix(u));
            CHECK(es.eigenvalues().minCoeff() > 0.0);
            // The boundary point maximizes <., u> among boundary points.
            const Vec w = random_unit(d, s);
            CHECK(boundary_point_from_normal(K, w).x.dot(u) <= K.h(u) + 1e-13);
            // Legendre transform lies on the polar boundary.
            CHECK(p.x.dot(legendre_transform(K, p)) == doctest::Approx(1.0).epsilon(1e-13));
            // radial function of the boundary point direction.
            CHECK(K.radial(p.x.normalized()) == doctest::Approx(p.x.norm()).epsilon(1e-9));
        }
    }
}

TEST_CASE("non-unit direction is an input error")
{
    const SupportBody B = SupportBody::ball(2, 1.0);
    CHECK_THROWS_AS(boundary_point_from_normal(B, Vec{{1.0, 1.0}}), InputError);
}

TEST_CASE("body JSON round trip")
{
    for (const SupportBody& K : test_bodies()) {
        const SupportBody L = SupportBody::from_json(K.to_json());
        SeedStream s(1);
        for (int i = 0; i < 20; ++i) {
            const Vec u = random_unit(K.dim(), s);
            CHECK(L.h(u) == K.h(u));
        }
    }
    CHECK_THROWS_AS(SupportBody::from_json({{"kind", "cube"}}), InputError);
}

TEST_CASE("polar of the cube is the cross-polytope")
{
    for (int d = 2; d <= 4; ++d) {
        const Polytope C = box_polytope(Vec::Constant(d, -1.0), Vec::Constant(d, 1.0));
        const Polytope X = polar_polytope(C);
        CHECK(point_set_hausdorff(X.vertices(), cross_polytope(d, 1.0).vertices()) < 1e-12);
        const Polytope CC = polar_polytope(X);
        CHECK(point_set_hausdorff(CC.vertices(), C.vertices()) < 1e-9);
    }
}

TEST_CASE("polar duality on a random 3-polytope")
{
    SeedStream s(77);
    std::vector<Vec> pts;
    for (int i = 0; i < 50; ++i)
        pts.push_back(random_unit(3, s) * s.uniform(0.5, 1.0));
    const Polytope P = convex_hull(pts, 3);
    const Polytope Q = polar_polytope(P);
    CHECK(Q.vertices().size() == P.facets().size());
    CHECK(Q.facets().size() == P.vertices().size());
    CHECK(point_set_hausdorff(polar_polytope(Q).vertices(), P.vertices()) < 1e-9);
}

TEST_CASE("radial and support functions of polytopes")
{
    const Polytope U = box_polytope(Vec::Constant(3, -1.0), Vec::Constant(3, 1.0));
    CHECK(radial_function(U, unit(3, 0)) == doctest::Approx(1.0));
    const Polytope S = box_polytope(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0));
    CHECK(radial_function(S, Vec{{1.0, 1.0}}.normalized()) == doctest::Approx(std::sqrt(2.0)));
    CHECK(support_function(U, Vec::Ones(3)) == doctest::Approx(3.0));

    SeedStream s(8);
    std::vector<Vec> pts;
    for (int i = 0; i < 40; ++i)
        pts.push_back(random_unit(3, s));
    const Polytope P = convex_hull(pts, 3);
    const Polytope Pstar = polar_polytope(P);
    for (int rep = 0; rep < 100; ++rep) {
        const Vec u = random_unit(3, s);
        const double rho = radial_function(P, u);
        CHECK(rho <= support_function(P, u) + 1e-12);
        // Bisection on membership.
        double lo = 0.0, hi = 2.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (P.contains(mid * u, 0.0) ? lo : hi) = mid;
        }
        CHECK(rho == doctest::Approx(lo).epsilon(1e-9));
        CHECK(support_function(P, u) == doctest::Approx(1.0 / radial_function(Pstar, u)).epsilon(1e-10));
    }
}

TEST_CASE("radial function needs the origin inside")
{
    const Polytope P = box_polytope(Vec::Constant(2, 1.0), Vec::Constant(2, 2.0));
    CHECK_THROWS_AS(radial_function(P, unit(2, 0)), DomainError);
    CHECK_THROWS_AS(polar_polytope(P), DomainError);
}
