#include "geoclt/measure.hpp"
#include "geoclt/rng.hpp"
#include "geoclt/sampling.hpp"

#include <doctest.h>

using namespace geoclt;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

Vec random_unit(int d, SeedStream& s)
{
    Vec v(d);
    for (int k = 0; k < d; ++k)
        v(k) = s.normal();
    return v.normalized();
}

Polytope random_polytope(int d, int n, std::uint64_t seed, double rmin = 0.4)
{
    SeedStream s(seed);
    std::vector<Vec> pts;
    for (int i = 0; i < n; ++i)
        pts.push_back(random_unit(d, s) * s.uniform(rmin, 1.0));
    return convex_hull(pts, d);
}

Polytope fine_ball(int d, int n)
{
    std::vector<Vec> pts = SupportBody::check_directions(d, n);
    return convex_hull(pts, d);
}

QuadratureSpec spec() { return QuadratureSpec{}; }

} // namespace

TEST_CASE("Gauss-Legendre integrates polynomials exactly")
{
    for (int m = 1; m <= 12; ++m) {
        const GaussRule g = gauss_legendre(m);
        for (int p = 0; p <= 2 * m - 1; ++p) {
            double q = 0.0;
            for (int i = 0; i < m; ++i)
                q += g.weights(i) * std::pow(g.nodes(i), p);
            const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
            CHECK(q == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
        }
    }
}

TEST_CASE("Gauss-Jacobi weights integrate the weight function")
{
    for (double a : {0.0, 1.0, 2.0, 3.0}) {
        const GaussRule g = gauss_jacobi(6, a, 0.0);
        // integral of (1-x)^a over [-1, 1] = 2^(a+1)/(a+1)
        CHECK(g.weights.sum() == doctest::Approx(std::pow(2.0, a + 1) / (a + 1)).epsilon(1e-13));
        double q = 0.0;
        for (int i = 0; i < 6; ++i)
            q += g.weights(i) * std::pow(1.0 + g.nodes(i), 5);
        // integral of (1-x)^a (1+x)^5 = 2^(a+6) B(a+1, 6)
        const double exact = std::pow(2.0, a + 6) * std::tgamma(a + 1) * std::tgamma(6.0) / std::tgamma(a + 7);
        CHECK(q == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("simplex rule reproduces Dirichlet moments up to its degree")
{
    for (int k = 1; k <= 4; ++k) {
        const SimplexRule r = simplex_rule(k, 9);
        CHECK(r.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
        SeedStream s(k);
        for (int rep = 0; rep < 30; ++rep) {
            std::vector<int> a(k + 1, 0);
            int total = 0;
            while (true) {
                const int i = static_cast<int>(s.uniform() * (k + 1));
                if (total + 1 > 9)
                    break;
                ++a[i];
                ++total;
                if (s.uniform() < 0.2)
                    break;
            }
            double q = 0.0;
            for (Eigen::Index j = 0; j < r.weights.size(); ++j) {
                double v = 1.0;
                for (int i = 0; i <= k; ++i)
                    v *= std::pow(r.bary(i, j), a[i]);
                q += r.weights(j) * v;
            }
            double exact = factorial(k) / factorial(total + k);
            for (int ai : a)
                exact *= factorial(ai);
            CHECK(q == doctest::Approx(exact).epsilon(1e-12));
        }
    }
}

TEST_CASE("refinement preserves measure")
{
    SimplexCols S(3, 4);
    S << 0, 1, 0, 0.2, 0, 0, 1, 0.3, 0, 0, 0, 1;
    double sum = 0.0;
    for (const auto& c : refine_simplex(S))
        sum += simplex_measure(c);
    CHECK(sum == doctest::Approx(simplex_measure(S)).epsilon(1e-14));
    CHECK(refine_simplex(S).size() == 8);
}

TEST_CASE("weighted volume with unit density")
{
    const Polytope C = box_polytope(Vec::Zero(3), Vec::Ones(3));
    const PointFunction one = [](const Vec&) { return 1.0; };
    CHECK(weighted_volume(C, one, spec()) == doctest::Approx(1.0).epsilon(1e-13));
    for (int d = 2; d <= 4; ++d) {
        const Polytope P = random_polytope(d, 30, 100 + d);
        CHECK(std::abs(weighted_volume(P, one, spec()) - polytope_volume(P)) < 1e-10);
    }
}

TEST_CASE("Klein weighted volume of a square against Monte Carlo")
{
    const Polytope sq = box_polytope(Vec::Constant(2, -0.5), Vec::Constant(2, 0.5));
    const PointFunction klein = [](const Vec& x) { return std::pow(1.0 - x.squaredNorm(), -1.5); };
    const double q = weighted_volume(sq, klein, spec());
    SeedStream s(2024);
    const int m = 10'000'000;
    double sum = 0.0, sum2 = 0.0;
    Vec x(2);
    for (int i = 0; i < m; ++i) {
        x << s.uniform(-0.5, 0.5), s.uniform(-0.5, 0.5);
        const double v = klein(x);
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / m;
    const double se = std::sqrt((sum2 / m - mean * mean) / m);
    CHECK(std::abs(q - mean) < 3.0 * se);
}

TEST_CASE("dual volume of a fine ball polytope tends to kappa_d")
{
    for (int d = 2; d <= 3; ++d) {
        const Polytope B = fine_ball(d, d == 2 ? 2000 : 3000);
        for (double j : {-2.0, -1.0, 1.0, 2.0, 3.0}) {
            const double v = dual_volume(B, j, spec());
            CHECK(v == doctest::Approx(kappa(d)).epsilon(d == 2 ? 1e-5 : 2e-2));
        }
    }
}

TEST_CASE("dual volume of order d equals volume")
{
    for (int d = 2; d <= 4; ++d) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const Polytope P = random_polytope(d, 25, seed * 31 + d);
            CHECK(std::abs(dual_volume(P, d, spec()) - polytope_volume(P)) < 1e-8 * polytope_volume(P));
        }
    }
}

TEST_CASE("dual volume routes agree for j = -1 on the square")
{
    const Polytope sq = box_polytope(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0));
    const double exact = dual_volume(sq, -1.0, spec());
    CHECK(dual_volume_complement(sq, -1.0, spec()) == doctest::Approx(exact).epsilon(1e-10));
    QuadratureSpec g = spec();
    g.sphere_nodes = 20000;
    CHECK(dual_volume_grid(sq, -1.0, g) == doctest::Approx(exact).epsilon(1e-6));
    // kappa_2 / (2 pi) * 8 * integral_0^{pi/4} cos(theta) dtheta = 2 sqrt 2
    CHECK(exact == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("dual volume and mean width grid routes match exact routes in 3D")
{
    const Polytope P = random_polytope(3, 30, 404);
    QuadratureSpec g = spec();
    g.sphere_nodes = 40000;
    CHECK(dual_volume_grid(P, -1.0, g) == doctest::Approx(dual_volume(P, -1.0, spec())).epsilon(2e-4));
    CHECK(mean_width_grid(P, g) == doctest::Approx(mean_width(P, spec())).epsilon(2e-4));
}

TEST_CASE("mean width oracles")
{
    // Fine polygon approximating the disc of radius r.
    const Polytope B = fine_ball(2, 4000).scaled(0.8);
    CHECK(mean_width(B, spec()) == doctest::Approx(1.6).epsilon(1e-6));
    // Rectangle: W = 2 (l + h) / pi.
    const double l = 1.5, h = 1e-6;
    const Polytope R = box_polytope(Vec{{0.0, 0.0}}, Vec{{l, h}});
    CHECK(mean_width(R, spec()) == doctest::Approx(2.0 * (l + h) / std::numbers::pi).epsilon(1e-8));
    // Cube [-1, 1]^3 against Monte Carlo of w(u) = sum |u_i| * 2.
    const Polytope C = box_polytope(Vec::Constant(3, -1.0), Vec::Constant(3, 1.0));
    SeedStream s(3);
    const int m = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < m; ++i) {
        const Vec u = random_unit(3, s);
        const double w = support_function(C, u) + support_function(C, -u);
        sum += w;
        sum2 += w * w;
    }
    const double mean = sum / m;
    const double se = std::sqrt((sum2 / m - mean * mean) / m);
    const double W = mean_width(C, spec());
    CHECK(std::abs(W - mean) < 3.0 * se);
    CHECK(W == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("mean width duality")
{
    const Polytope L = box_polytope(Vec::Constant(2, -3.0), Vec::Constant(2, 3.0));
    QuadratureSpec q = spec();
    q.sphere_nodes = 20000;
    CHECK(mean_width_dual(L, L, q) == doctest::Approx(mean_width(L, q)).epsilon(1e-10));
    const Polytope L3 = box_polytope(Vec::Constant(3, -3.0), Vec::Constant(3, 3.0));
    CHECK(mean_width_dual(L3, L3, q) == doctest::Approx(mean_width(L3, q)).epsilon(1e-10));

    const SupportBody K = SupportBody::ellipsoid(Vec{{1.0, 0.6}});
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        SeedStream s(seed);
        std::vector<Halfspace> hs;
        for (int i = 0; i < 12; ++i) {
            const BoundaryPoint p = boundary_point_from_normal(K, random_unit(2, s));
            hs.push_back({p.normal, p.normal.dot(p.x)});
        }
        const Polytope P = halfspace_intersection(hs, L, Vec::Zero(2));
        CHECK(std::abs(mean_width(P, q) - mean_width_dual(hs, L, q)) < 1e-10);
        QuadratureSpec g = q;
        g.sphere_method = SphereMethod::Grid;
        CHECK(std::abs(mean_width(P, g) - mean_width_dual(hs, L, g)) < 1e-4);
    }
}

TEST_CASE("monotonicity on nested polytopes")
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SeedStream s(seed);
        std::vector<Vec> pts;
        for (int i = 0; i < 20; ++i)
            pts.push_back(random_unit(2, s) * s.uniform(0.5, 1.0));
        const Polytope small = convex_hull(pts, 2);
        for (int i = 0; i < 10; ++i)
            pts.push_back(random_unit(2, s) * s.uniform(0.8, 1.2));
        const Polytope big = convex_hull(pts, 2);
        const PointFunction phi = [](const Vec& x) { return 1.0 + x.squaredNorm(); };
        CHECK(weighted_volume(small, phi, spec()) <= weighted_volume(big, phi, spec()));
        for (double j : {0.5, 1.0, 2.0})
            CHECK(dual_volume(small, j, spec()) <= dual_volume(big, j, spec()));
        CHECK(mean_width(small, spec()) <= mean_width(big, spec()));
    }
}

TEST_CASE("scaling laws")
{
    for (int d = 2; d <= 3; ++d) {
        const Polytope P = random_polytope(d, 30, 900 + d);
        for (double lam : {0.5, 2.0}) {
            const Polytope Q = P.scaled(lam);
            for (double j : {-1.0, 1.0, 2.0, static_cast<double>(d)})
                CHECK(std::abs(dual_volume(Q, j, spec()) / (std::pow(lam, j) * dual_volume(P, j, spec())) - 1.0) <
                      1e-8);
            CHECK(mean_width(Q, spec()) == doctest::Approx(lam * mean_width(P, spec())).epsilon(1e-12));
            const PointFunction one = [](const Vec&) { return 1.0; };
            CHECK(weighted_volume(Q, one, spec()) ==
                  doctest::Approx(std::pow(lam, d) * weighted_volume(P, one, spec())).epsilon(1e-12));
        }
    }
}

TEST_CASE("dual volume needs the origin inside")
{
    const Polytope P = box_polytope(Vec::Constant(2, 0.5), Vec::Constant(2, 1.0));
    CHECK_THROWS_AS(dual_volume(P, -1.0, spec()), DomainError);
}

TEST_CASE("quadrature spec validation and JSON")
{
    QuadratureSpec q;
    q.rel_tol = 1.5;
    CHECK_THROWS_AS(q.validate(), ConfigError);
    q = QuadratureSpec{};
    q.sphere_nodes = 0;
    CHECK_THROWS_AS(q.validate(), ConfigError);
    q = QuadratureSpec{};
    q.sphere_method = SphereMethod::Grid;
    q.sphere_nodes = 1234;
    const QuadratureSpec r = QuadratureSpec::from_json(q.to_json());
    CHECK(r.sphere_nodes == 1234);
    CHECK(r.sphere_method == SphereMethod::Grid);
}

TEST_CASE("sphere rules are normalized and integrate low harmonics")
{
    for (int d = 2; d <= 4; ++d) {
        const SphereRule r = sphere_rule(d, 5000, d == 2 ? 0 : 7);
        double w = 0.0;
        for (double x : r.weights)
            w += x;
        CHECK(w == doctest::Approx(1.0).epsilon(1e-13));
    }
    // Average of u_1^2 over S^{d-1} is 1/d.
    CHECK(sphere_average(2, [](const Vec& u) { return u(0) * u(0); }, 64) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sphere_average(3, [](const Vec& u) { return u(0) * u(0); }, 20000, true) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-5));
}
