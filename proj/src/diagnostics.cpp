#include "geoclt/diagnostics.hpp"

#include "geoclt/parallel.hpp"
#include "geoclt/quadrature.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace geoclt {

namespace {

Vec angle_dir(double a) { return (Vec(2) << std::cos(a), std::sin(a)).finished(); }

/// Root of g on [a, b] where g(a) > 0 > g(b).
double bracket_root(const std::function<double(double)>& g, double a, double b)
{
    boost::uintmax_t iters = 200;
    const auto tol = boost::math::tools::eps_tolerance<double>(50);
    const auto r = boost::math::tools::toms748_solve(g, a, b, tol, iters);
    if (iters >= 200)
        throw DomainError("cap root bracket did not converge");
    return 0.5 * (r.first + r.second);
}

/// Composite Gauss-Legendre on [a, b].
double composite_gl(const std::function<double(double)>& f, double a, double b, double panel = 0.5)
{
    static const GaussRule g = gauss_legendre(24);
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
    const double h = (b - a) / panels;
    KahanSum s;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        double acc = 0.0;
        for (int i = 0; i < g.nodes.size(); ++i)
            acc += g.weights(i) * f(lo + 0.5 * h * (g.nodes(i) + 1.0));
        s.add(0.5 * h * acc);
    }
    return s.value();
}

double boundary_weight(const SupportBody& K, const GeometryWeights& w, const Vec& v)
{
    const BoundaryPoint p = boundary_point_from_normal(K, v);
    return w.sigma_density(p) * p.area_jacobian;
}

struct CapInfo {
    double measure = 0.0;
    double angle = 0.0;
};

CapInfo cap_info(const SupportBody& K, const GeometryWeights& w, const Vec& u, double s)
{
    const int d = K.dim();
    if (d != 2 && d != 3)
        throw DomainError("cap measures are implemented for d in {2, 3}");
    if (std::abs(u.norm() - 1.0) > 1e-10)
        throw InputError("cap direction must be a unit vector");
    const double hu = K.h(u);
    const double hm = -K.h(-u);
    if (s >= hu)
        return {0.0, 0.0};
    if (s <= hm)
        return {1.0, std::numbers::pi};
    if (d == 2) {
        const double alpha = std::atan2(u(1), u(0));
        auto g = [&](double th) { return K.grad_h(angle_dir(alpha + th)).dot(u) - s; };
        const double tp = bracket_root(g, 0.0, std::numbers::pi);
        const double tm = bracket_root([&](double th) { return g(-th); }, 0.0, std::numbers::pi);
        const double mass = composite_gl(
            [&](double th) { return boundary_weight(K, w, angle_dir(alpha + th)); }, -tm, tp);
        return {mass / w.normalizer, std::max(tp, tm)};
    }
    const Mat E = tangent_frame(u);
    const int npsi = 64;
    KahanSum total;
    double widest = 0.0;
    for (int k = 0; k < npsi; ++k) {
        const double psi = 2.0 * std::numbers::pi * (k + 0.5) / npsi;
        const Vec e = std::cos(psi) * E.col(0) + std::sin(psi) * E.col(1);
        auto dir = [&](double th) { return Vec(std::cos(th) * u + std::sin(th) * e); };
        const double tmax =
            bracket_root([&](double th) { return K.grad_h(dir(th)).dot(u) - s; }, 0.0, std::numbers::pi);
        widest = std::max(widest, tmax);
        total.add(composite_gl([&](double th) { return boundary_weight(K, w, dir(th)) * std::sin(th); }, 0.0,
                               tmax));
    }
    return {total.value() * (2.0 * std::numbers::pi / npsi) / w.normalizer, widest};
}

/// Support function of the solid cap K cap {<x, u> >= s} in direction v:
/// min over lambda >= 0 of h_K(v + lambda u) - lambda s.
double cap_support(const SupportBody& K, const Vec& u, double s, const Vec& v)
{
    auto phi = [&](double lam) { return K.h(v + lam * u) - lam * s; };
    double hi = 1.0;
    while (phi(2.0 * hi) < phi(hi) && hi < 1e12)
        hi *= 2.0;
    const auto r = boost::math::tools::brent_find_minima(phi, 0.0, 2.0 * hi, 50);
    return std::min(r.second, phi(0.0));
}

bool caps_meet(const SupportBody& K, const Vec& u1, double s1, const Vec& u2, double s2)
{
    auto phi = [&](double mu) { return K.h(mu * u1 + (1.0 - mu) * u2) - mu * s1 - (1.0 - mu) * s2; };
    const auto r = boost::math::tools::brent_find_minima(phi, 0.0, 1.0, 50);
    return r.second >= 0.0;
}

} // namespace

double cap_measure(const SupportBody& K, const GeometryWeights& w, const Vec& u, double s)
{
    return std::clamp(cap_info(K, w, u, s).measure, 0.0, 1.0);
}

int default_surface_grid(int d, double t)
{
    if (d == 2)
        return std::max(720, static_cast<int>(std::ceil(8.0 / t)));
    return std::max(2562, static_cast<int>(std::ceil(50.0 / t)));
}

SurfaceBodyApprox surface_body(const SupportBody& K, const GeometryWeights& w, double t, int grid_size)
{
    const int d = K.dim();
    if (d != 2 && d != 3)
        throw DomainError("surface bodies are implemented for d in {2, 3}");
    if (!(t > 0.0 && t < 0.5))
        throw DomainError("surface body parameter must lie in (0, 1/2)");
    const int grid = grid_size > 0 ? grid_size : default_surface_grid(d, t);
    SurfaceBodyApprox sb;
    sb.t = t;
    sb.directions = SupportBody::check_directions(d, grid);
    sb.offsets.resize(sb.directions.size());
    sb.cap_angles.resize(sb.directions.size());
    std::vector<Halfspace> hs;
    hs.reserve(sb.directions.size());
    for (std::size_t i = 0; i < sb.directions.size(); ++i) {
        const Vec& u = sb.directions[i];
        const double hu = K.h(u);
        const double hm = -K.h(-u);
        const double s =
            bracket_root([&](double x) { return cap_info(K, w, u, x).measure - t; }, hm, hu);
        sb.offsets[i] = s;
        sb.cap_angles[i] = cap_info(K, w, u, s).angle;
        hs.push_back({u, s});
    }
    auto [lo, hi] = K.bounding_box();
    const Vec pad = Vec::Constant(d, 0.1 * (hi - lo).maxCoeff());
    sb.polytope = halfspace_intersection(hs, box_polytope(lo - pad, hi + pad));
    return sb;
}

std::vector<int> caps_containing(const SurfaceBodyApprox& sb, const Vec& z)
{
    std::vector<int> out;
    for (std::size_t i = 0; i < sb.directions.size(); ++i)
        if (sb.directions[i].dot(z) >= sb.offsets[i])
            out.push_back(static_cast<int>(i));
    return out;
}

bool segment_hits_polytope(const Vec& a, const Vec& b, const Polytope& P, const std::vector<int>& facets)
{
    double t0 = 0.0;
    double t1 = 1.0;
    const Vec dir = b - a;
    for (int fi : facets) {
        const Facet& f = P.facets()[fi];
        const double num = f.offset - f.normal.dot(a);
        const double den = f.normal.dot(dir);
        if (den == 0.0) {
            if (num < 0.0)
                return false;
            continue;
        }
        const double t = num / den;
        if (den > 0.0)
            t1 = std::min(t1, t);
        else
            t0 = std::max(t0, t);
        if (t0 > t1)
            return false;
    }
    return true;
}

Estimate visibility_measure(const SupportBody& K, const std::function<double(const Vec&)>& phi,
                            const SurfaceBodyApprox& sb, const BoundaryPoint& z, long mc_budget, SeedStream& stream,
                            std::vector<Vec>* accepted)
{
    const int d = K.dim();
    if (mc_budget < 1)
        throw InputError("Monte Carlo budget must be positive");
    const std::vector<int> caps = caps_containing(sb, z.x);
    if (caps.empty())
        throw NumericalError("no grid cap contains z; refine the surface-body grid");
    Vec lo = Vec::Constant(d, INFINITY);
    Vec hi = Vec::Constant(d, -INFINITY);
    for (int c : caps) {
        const Vec& u = sb.directions[c];
        for (int k = 0; k < d; ++k) {
            hi(k) = std::max(hi(k), cap_support(K, u, sb.offsets[c], unit(d, k)));
            lo(k) = std::min(lo(k), -cap_support(K, u, sb.offsets[c], -unit(d, k)));
        }
    }
    const Vec margin = (hi - lo) * 1e-9 + Vec::Constant(d, 1e-15);
    lo -= margin;
    hi += margin;
    double box_volume = 1.0;
    for (int k = 0; k < d; ++k)
        box_volume *= hi(k) - lo(k);

    // Facets whose hyperplane cuts the box; a facet with the whole box outside
    // its half-space means the polytope misses the box entirely.
    const Polytope& P = sb.polytope;
    std::vector<int> facets;
    bool box_clear = false;
    for (std::size_t fi = 0; fi < P.facets().size(); ++fi) {
        const Facet& f = P.facets()[fi];
        double mx = 0.0;
        double mn = 0.0;
        for (int k = 0; k < d; ++k) {
            mx += std::max(f.normal(k) * lo(k), f.normal(k) * hi(k));
            mn += std::min(f.normal(k) * lo(k), f.normal(k) * hi(k));
        }
        if (mn > f.offset) {
            box_clear = true;
            break;
        }
        if (mx > f.offset)
            facets.push_back(static_cast<int>(fi));
    }

    KahanSum sum;
    KahanSum sum2;
    long hits = 0;
    Vec y(d);
    for (long i = 0; i < mc_budget; ++i) {
        for (int k = 0; k < d; ++k)
            y(k) = stream.uniform(lo(k), hi(k));
        double v = 0.0;
        if (K.contains(y) && !P.contains(y, 0.0) && (box_clear || !segment_hits_polytope(z.x, y, P, facets))) {
            v = phi(y);
            ++hits;
            if (accepted)
                accepted->push_back(y);
        }
        sum.add(v);
        sum2.add(v * v);
    }
    if (hits == 0)
        throw NumericalError("visibility Monte Carlo accepted no points");
    const double m = sum.value() / mc_budget;
    const double var = std::max(0.0, sum2.value() / mc_budget - m * m);
    return {box_volume * m, box_volume * std::sqrt(var / mc_budget), mc_budget};
}

bool visibility_overlaps(const SupportBody& K, const SurfaceBodyApprox& sb, const Vec& z, const Vec& y)
{
    const std::vector<int> cz = caps_containing(sb, z);
    const std::vector<int> cy = caps_containing(sb, y);
    struct Pair {
        double angle;
        int a;
        int b;
    };
    std::vector<Pair> pairs;
    for (int a : cz)
        for (int b : cy) {
            const double ang = std::acos(std::clamp(sb.directions[a].dot(sb.directions[b]), -1.0, 1.0));
            if (ang <= sb.cap_angles[a] + sb.cap_angles[b] + 1e-9)
                pairs.push_back({ang, a, b});
        }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& p, const Pair& q) {
        return p.angle < q.angle || (p.angle == q.angle && (p.a < q.a || (p.a == q.a && p.b < q.b)));
    });
    for (const Pair& p : pairs)
        if (p.a == p.b || caps_meet(K, sb.directions[p.a], sb.offsets[p.a], sb.directions[p.b], sb.offsets[p.b]))
            return true;
    return false;
}

Estimate overlap_measure(const SupportBody& K, const GeometryWeights& w, const SurfaceBodyApprox& sb,
                         const BoundaryPoint& z, long mc_budget, SeedStream& stream)
{
    const int d = K.dim();
    if (d == 2) {
        const double alpha = std::atan2(z.normal(1), z.normal(0));
        auto ov = [&](double delta) {
            return visibility_overlaps(K, sb, z.x, K.grad_h(angle_dir(alpha + delta)));
        };
        auto edge = [&](double sign) {
            if (ov(sign * std::numbers::pi))
                return std::numbers::pi;
            double a = 0.0;
            double b = std::numbers::pi;
            while (b - a > 1e-10) {
                const double m = 0.5 * (a + b);
                if (ov(sign * m))
                    a = m;
                else
                    b = m;
            }
            return 0.5 * (a + b);
        };
        const double up = edge(1.0);
        const double down = edge(-1.0);
        if (up + down >= 2.0 * std::numbers::pi)
            return {1.0, 0.0, 0};
        const double mass = composite_gl(
            [&](double th) { return boundary_weight(K, w, angle_dir(alpha + th)); }, -down, up);
        return {mass / w.normalizer, 0.0, 0};
    }
    if (mc_budget < 1)
        throw InputError("Monte Carlo budget must be positive");
    const BoundarySampler sampler(K, w);
    const auto ys = sampler.sample(stream, static_cast<int>(mc_budget));
    long hits = 0;
    for (const BoundaryPoint& y : ys)
        if (visibility_overlaps(K, sb, z.x, y.x))
            ++hits;
    const double p = static_cast<double>(hits) / mc_budget;
    return {p, std::sqrt(p * (1.0 - p) / mc_budget), mc_budget};
}

Estimate containment_probability(const SupportBody& K, const GeometryWeights& w, int n, double c, int reps,
                                 const SeedStream& stream, int grid_size)
{
    const int d = K.dim();
    if (n < d + 1)
        throw InputError("containment needs n >= d+1");
    if (reps < 1)
        throw InputError("containment needs at least one replication");
    const double tau = c * std::log(static_cast<double>(n)) / n;
    const SurfaceBodyApprox sb = surface_body(K, w, tau, grid_size);
    const BoundarySampler sampler(K, w);
    std::vector<char> failed(reps, 0);
    parallel_for(reps, worker_count(), [&](std::size_t r) {
        SeedStream s = stream.child(r);
        std::vector<Vec> pts;
        for (BoundaryPoint& p : sampler.sample(s, n))
            pts.push_back(std::move(p.x));
        const Polytope H = convex_hull(pts, d);
        for (const Vec& v : sb.polytope.vertices())
            if (!H.contains(v)) {
                failed[r] = 1;
                break;
            }
    });
    long fails = 0;
    for (char f : failed)
        fails += f;
    const double p = static_cast<double>(fails) / reps;
    return {p, std::sqrt(p * (1.0 - p) / reps), reps};
}

DifferenceStats difference_moments(const SupportBody& K, const GeometryWeights& w, const SetFunctional& f, int n,
                                   int reps, const SeedStream& stream, double zero_tol)
{
    const int d = K.dim();
    if (n < d + 3)
        throw InputError("difference moments need n >= d+3 so that n-2 points still span a polytope");
    if (reps < 2)
        throw InputError("difference moments need at least two replications");
    const BoundarySampler sampler(K, w);
    std::vector<double> d1(reps), nz(reps);
    parallel_for(reps, worker_count(), [&](std::size_t r) {
        SeedStream s = stream.child(r);
        std::vector<Vec> pts;
        for (BoundaryPoint& p : sampler.sample(s, n))
            pts.push_back(std::move(p.x));
        const double f0 = f(pts);
        const std::vector<Vec> no1(pts.begin() + 1, pts.end());
        std::vector<Vec> no2 = pts;
        no2.erase(no2.begin() + 1);
        const std::vector<Vec> no12(pts.begin() + 2, pts.end());
        const double f1 = f(no1);
        const double f2 = f(no2);
        const double f12 = f(no12);
        d1[r] = f0 - f1;
        const double d12 = (f0 - f2) - (f1 - f12);
        nz[r] = std::abs(d12) > zero_tol * std::abs(f0) ? 1.0 : 0.0;
    });
    DifferenceStats st;
    st.n = n;
    st.rep_count = reps;
    KahanSum m4, m8, ma, mz;
    for (int r = 0; r < reps; ++r) {
        const double q = std::pow(d1[r], 4);
        m4.add(q);
        m8.add(q * q);
        ma.add(std::abs(d1[r]));
        mz.add(nz[r]);
    }
    st.B3_hat = m4.value() / reps;
    st.B3_stderr = std::sqrt(std::max(0.0, m8.value() / reps - st.B3_hat * st.B3_hat) / (reps - 1));
    st.D1_mean_abs = ma.value() / reps;
    st.D12_nonzero_rate = mz.value() / reps;
    st.D12_stderr = std::sqrt(st.D12_nonzero_rate * (1.0 - st.D12_nonzero_rate) / reps);
    return st;
}

} // namespace geoclt
