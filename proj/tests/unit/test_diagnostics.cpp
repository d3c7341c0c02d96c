#include "geoclt/diagnostics.hpp"
#include "geoclt/measure.hpp"

#include <doctest.h>

using namespace geoclt;

namespace {

Vec dir2(double a) { return Vec{{std::cos(a), std::sin(a)}}; }

} // namespace

TEST_CASE("cap measure on the uniform disc")
{
    const SupportBody K = SupportBody::ball(2, 1.0);
    const GeometryWeights w = euclidean_weights(K);
    for (double t : {0.001, 0.01, 0.1, 0.3, 0.45})
        CHECK(cap_measure(K, w, dir2(0.3), std::cos(std::numbers::pi * t)) == doctest::Approx(t).epsilon(1e-10));
    CHECK(cap_measure(K, w, dir2(1.0), -1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cap_measure(K, w, dir2(1.0), 1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    double prev = 1.0;
    for (double s = -0.99; s < 1.0; s += 0.05) {
        const double m = cap_measure(K, w, dir2(2.0), s);
        CHECK(m <= prev + 1e-14);
        prev = m;
    }
}

TEST_CASE("cap measure on the uniform sphere is linear in height")
{
    const SupportBody K = SupportBody::ball(3, 1.0);
    const GeometryWeights w = euclidean_weights(K);
    const Vec u = Vec{{1.0, 2.0, 2.0}} / 3.0;
    for (double s : {0.99, 0.9, 0.5, 0.0})
        CHECK(cap_measure(K, w, u, s) == doctest::Approx((1.0 - s) / 2.0).epsilon(1e-8));
}

TEST_CASE("surface body of the uniform disc")
{
    const SupportBody K = SupportBody::ball(2, 1.0);
    const GeometryWeights w = euclidean_weights(K);
    const SurfaceBodyApprox sb = surface_body(K, w, 0.05, 360);
    CHECK(sb.directions.size() == 360);
    for (double s : sb.offsets)
        CHECK(s == doctest::Approx(std::cos(std::numbers::pi * 0.05)).epsilon(1e-10));
    for (const Vec& v : sb.polytope.vertices())
        CHECK(K.contains(v));
    // Nesting in t.
    const SurfaceBodyApprox sb2 = surface_body(K, w, 0.1, 360);
    for (const Vec& v : sb2.polytope.vertices())
        CHECK(sb.polytope.contains(v, 1e-12));
    // Small t approaches K.
    const SurfaceBodyApprox tiny = surface_body(K, w, 1e-4, 720);
    double gap = 0.0;
    for (const Vec& v : tiny.polytope.vertices())
        gap = std::max(gap, std::abs(1.0 - v.norm()));
    CHECK(gap < 1e-3);
    CHECK_THROWS_AS(surface_body(K, w, 0.5), DomainError);
    CHECK(default_surface_grid(2, 0.001) >= 720);
}

TEST_CASE("surface body of a non-uniform measure stays inside K")
{
    const SupportBody K = SupportBody::ellipsoid(Vec{{0.6, 0.4}});
    const GeometryWeights w = riemannian_weights(RiemannianKind::Klein, K);
    const SurfaceBodyApprox sb = surface_body(K, w, 0.02, 720);
    for (std::size_t i = 0; i < sb.directions.size(); i += 37)
        CHECK(cap_measure(K, w, sb.directions[i], sb.offsets[i]) == doctest::Approx(0.02).epsilon(1e-8));
    for (const Vec& v : sb.polytope.vertices())
        CHECK(K.contains(v));
}

TEST_CASE("segment clipping")
{
    const Polytope P = box_polytope(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0));
    std::vector<int> all(P.facets().size());
    for (std::size_t i = 0; i < all.size(); ++i)
        all[i] = static_cast<int>(i);
    CHECK(segment_hits_polytope(Vec{{-2.0, 0.0}}, Vec{{2.0, 0.0}}, P, all));
    CHECK_FALSE(segment_hits_polytope(Vec{{-2.0, 1.5}}, Vec{{2.0, 1.5}}, P, all));
    CHECK(segment_hits_polytope(Vec{{-2.0, 1.0}}, Vec{{2.0, 1.0}}, P, all));
    CHECK_FALSE(segment_hits_polytope(Vec{{1.5, 0.0}}, Vec{{3.0, 5.0}}, P, all));
    CHECK(segment_hits_polytope(Vec{{0.0, 0.0}}, Vec{{0.1, 0.1}}, P, all));
}

TEST_CASE("visibility region: containment and cap identity")
{
    const SupportBody K = SupportBody::ball(2, 1.0);
    const GeometryWeights w = euclidean_weights(K);
    const double t = 0.03;
    const SurfaceBodyApprox sb = surface_body(K, w, t);
    const BoundaryPoint z = boundary_point_from_normal(K, dir2(0.7));
    SeedStream s(1);
    std::vector<Vec> acc;
    const Estimate e = visibility_measure(K, w.phi, sb, z, 40000, s, &acc);
    CHECK(e.value > 0.0);
    CHECK(e.value <= std::numbers::pi - polytope_volume(sb.polytope) + 4.0 * e.stderr_);
    CHECK_FALSE(caps_containing(sb, z.x).empty());
    // Continuum t-caps of the uniform disc are {x : <x, u> >= cos(pi t)}. The
    // grid polytope contains the true surface body, so every visible y shares
    // a continuum cap with z.
    const double s_t = std::cos(std::numbers::pi * t);
    const int m = 20000;
    int missing = 0;
    for (const Vec& y : acc) {
        bool in_cap = false;
        for (int k = 0; k < m && !in_cap; ++k) {
            const Vec u = dir2(2.0 * std::numbers::pi * k / m);
            in_cap = z.x.dot(u) >= s_t - 1e-6 && y.dot(u) >= s_t - 1e-6;
        }
        missing += in_cap ? 0 : 1;
    }
    CHECK(missing == 0);
}

TEST_CASE("visibility overlap")
{
    const SupportBody K = SupportBody::ball(2, 1.0);
    const GeometryWeights w = euclidean_weights(K);
    const SurfaceBodyApprox sb = surface_body(K, w, 0.02);
    const Vec z = dir2(0.0);
    CHECK(visibility_overlaps(K, sb, z, z));
    CHECK(visibility_overlaps(K, sb, z, dir2(0.05)));
    CHECK_FALSE(visibility_overlaps(K, sb, z, dir2(std::numbers::pi)));
    SeedStream s(2);
    const Estimate e = overlap_measure(K, w, sb, boundary_point_from_normal(K, z), 1000, s);
    CHECK(e.value > 0.0);
    CHECK(e.value < 0.2);
    // Two t-caps meet iff their arcs overlap: normal angle gap below 4 pi t.
    CHECK(e.value == doctest::Approx(4.0 * 0.02).epsilon(0.05));
}

TEST_CASE("containment probability")
{
    const SupportBody K = SupportBody::ball(2, 1.0);
    const GeometryWeights w = euclidean_weights(K);
    const SeedStream root(5);
    const Estimate big_c = containment_probability(K, w, 500, 8.0, 1000, root.child(0));
    CHECK(big_c.value == 0.0);
    const Estimate tiny = containment_probability(K, w, 3, 0.01, 200, root.child(1));
    CHECK(tiny.value > 0.9);
    double prev = 1.0;
    for (int n : {20, 80, 320}) {
        const Estimate e = containment_probability(K, w, n, 1.0, 400, root.child(10 + n));
        CHECK(e.value <= prev + 4.0 * e.stderr_ + 1e-12);
        prev = e.value;
    }
}

TEST_CASE("difference operator moments")
{
    const SupportBody K = SupportBody::ball(2, 1.0);
    const GeometryWeights w = euclidean_weights(K);
    const SetFunctional area = [](const std::vector<Vec>& pts) { return polytope_volume(convex_hull(pts, 2)); };
    // Removing an interior point changes nothing.
    std::vector<Vec> pts{dir2(0.0), dir2(2.0), dir2(4.0), Vec{{0.1, 0.0}}};
    std::vector<Vec> without(pts.begin(), pts.end() - 1);
    CHECK(area(pts) == area(without));

    const SeedStream root(3);
    const DifferenceStats a = difference_moments(K, w, area, 20, 300, root.child(0));
    const DifferenceStats b = difference_moments(K, w, area, 200, 300, root.child(1));
    CHECK(a.B3_hat >= 0.0);
    CHECK(a.D12_nonzero_rate >= 0.0);
    CHECK(a.D12_nonzero_rate <= 1.0);
    CHECK(b.B3_hat < a.B3_hat);
    CHECK(b.D12_nonzero_rate <= a.D12_nonzero_rate + 4.0 * (a.D12_stderr + b.D12_stderr));
    CHECK_THROWS_AS(difference_moments(K, w, area, 4, 10, root), InputError);
}
