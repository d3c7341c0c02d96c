#include "geoclt/measure.hpp"
#include "geoclt/quadrature.hpp"
#include "geoclt/sampling.hpp"
#include "geoclt/stats.hpp"

#include <doctest.h>

#include <algorithm>

using namespace geoclt;

namespace {

// One-sample KS statistic against a CDF.
double ks_uniform(std::vector<double> u)
{
    std::sort(u.begin(), u.end());
    const double m = static_cast<double>(u.size());
    double d = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        d = std::max({d, (i + 1) / m - u[i], u[i] - i / m});
    return d;
}

} // namespace

TEST_CASE("uniform boundary points on the sphere are centred")
{
    for (int d = 2; d <= 3; ++d) {
        const SupportBody B = SupportBody::ball(d, 1.0);
        const GeometryWeights w = euclidean_weights(B);
        SeedStream s(d);
        const int n = 20000;
        const auto pts = sample_boundary(B, w, s, n);
        CHECK(pts.size() == static_cast<std::size_t>(n));
        Vec mean = Vec::Zero(d);
        for (const BoundaryPoint& p : pts) {
            mean += p.x;
            CHECK(p.x.norm() == doctest::Approx(1.0).epsilon(1e-14));
        }
        mean /= n;
        for (int k = 0; k < d; ++k)
            CHECK(std::abs(mean(k)) < 4.0 / std::sqrt(n));
    }
}

TEST_CASE("Hausdorff measure on an ellipse follows arc length")
{
    const double a = 2.0, b = 1.0;
    const SupportBody E = SupportBody::ellipsoid(Vec{{a, b}});
    const GeometryWeights w = euclidean_weights(E);
    // Tabulated arc-length CDF in the parameter t of (a cos t, b sin t).
    const int cells = 20000;
    std::vector<double> cum(cells + 1, 0.0);
    const auto speed = [&](double t) { return std::hypot(a * std::sin(t), b * std::cos(t)); };
    const GaussRule g = gauss_legendre(8);
    const double dt = 2.0 * std::numbers::pi / cells;
    for (int i = 0; i < cells; ++i) {
        double q = 0.0;
        for (int k = 0; k < 8; ++k)
            q += g.weights(k) * speed(dt * (i + 0.5 + 0.5 * g.nodes(k)));
        cum[i + 1] = cum[i] + 0.5 * dt * q;
    }
    const double total = cum.back();
    CHECK(total == doctest::Approx(w.normalizer).epsilon(1e-10));

    SeedStream s(99);
    const int n = 100000;
    std::vector<double> u;
    u.reserve(n);
    for (const BoundaryPoint& p : sample_boundary(E, w, s, n)) {
        double t = std::atan2(p.x(1) / b, p.x(0) / a);
        if (t < 0)
            t += 2.0 * std::numbers::pi;
        const double pos = t / dt;
        const int i = std::min(static_cast<int>(pos), cells - 1);
        u.push_back((cum[i] + (pos - i) * (cum[i + 1] - cum[i])) / total);
    }
    // Asymptotic KS critical value at level 0.01.
    CHECK(ks_uniform(u) < 1.628 / std::sqrt(n));
}

TEST_CASE("Klein weights on a centred ball give a rotation-invariant sample")
{
    const SupportBody K = SupportBody::ball(2, 0.5);
    const GeometryWeights w = riemannian_weights(RiemannianKind::Klein, K);
    SeedStream s(5);
    const int n = 20000;
    std::vector<double> u;
    for (const BoundaryPoint& p : sample_boundary(K, w, s, n))
        u.push_back((std::atan2(p.x(1), p.x(0)) + std::numbers::pi) / (2.0 * std::numbers::pi));
    CHECK(ks_uniform(u) < 1.628 / std::sqrt(n));
}

TEST_CASE("gnomonic boundary measure on an off-centre ball favours the near side")
{
    const SupportBody K = SupportBody::ball(2, 0.5, Vec{{0.3, 0.0}});
    const GeometryWeights w = riemannian_weights(RiemannianKind::Gnomonic, K);
    SeedStream s(8);
    int near = 0;
    const int n = 20000;
    for (const BoundaryPoint& p : sample_boundary(K, w, s, n))
        near += p.x(0) < 0.3;
    CHECK(near > n / 2 + 4 * std::sqrt(n / 4.0));
}

TEST_CASE("sampler replays identically")
{
    const SupportBody K = SupportBody::perturbed_ball(3, 1.0, 0.05);
    const GeometryWeights w = euclidean_weights(K);
    const BoundarySampler sampler(K, w);
    SeedStream s1(7, {1, 2});
    SeedStream s2(7, {1, 2});
    const auto a = sampler.sample(s1, 100);
    const auto b = sampler.sample(s2, 100);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a[i].x == b[i].x);
}

TEST_CASE("low acceptance is a configuration error")
{
    const SupportBody B = SupportBody::ball(2, 1.0);
    GeometryWeights w = euclidean_weights(B);
    // Density concentrated in a tiny arc around a grid direction.
    const double a0 = std::numbers::pi / 3600.0;
    w.sigma_density = [a0](const BoundaryPoint& p) {
        return std::abs(std::atan2(p.x(1), p.x(0)) - a0) < 1e-5 ? 1.0 : 1e-7;
    };
    const BoundarySampler sampler(B, w);
    SeedStream s(1);
    CHECK_THROWS_AS(sampler.sample(s, 100), ConfigError);
    CHECK_THROWS_AS(sampler.sample(s, 0), InputError);
}

TEST_CASE("simplex sampling")
{
    const std::vector<Vec> tri{Vec{{0.0, 0.0}}, Vec{{1.0, 0.0}}, Vec{{0.0, 1.0}}};
    SeedStream s(4);
    const int n = 50000;
    const auto pts = sample_simplex(tri, s, n);
    Vec mean = Vec::Zero(2);
    for (const Vec& p : pts) {
        CHECK((p.minCoeff() >= 0.0 && p.sum() <= 1.0 + 1e-15));
        mean += p;
    }
    mean /= n;
    CHECK(std::abs(mean(0) - 1.0 / 3.0) < 4.0 / std::sqrt(n));
    CHECK(std::abs(mean(1) - 1.0 / 3.0) < 4.0 / std::sqrt(n));

    // Hit-or-miss volume of the unit cube inside the corner simplex of side 3.
    std::vector<Vec> big{Vec::Zero(3), 3.0 * unit(3, 0), 3.0 * unit(3, 1), 3.0 * unit(3, 2)};
    const auto q = sample_simplex(big, s, n);
    int hits = 0;
    for (const Vec& p : q)
        hits += p.maxCoeff() <= 1.0;
    const double p = static_cast<double>(hits) / n;
    const double vol = 4.5 * p;
    CHECK(std::abs(vol - 1.0) < 3.0 * 4.5 * std::sqrt(p * (1 - p) / n));

    SeedStream r1(3), r2(3);
    CHECK(sample_simplex(tri, r1, 10) == sample_simplex(tri, r2, 10));
    const std::vector<Vec> flat{Vec{{0.0, 0.0}}, Vec{{1.0, 1.0}}, Vec{{2.0, 2.0}}};
    CHECK_THROWS_AS(sample_simplex(flat, s, 5), DomainError);
}
