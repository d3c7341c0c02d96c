#include "geoclt/sampling.hpp"

#include "geoclt/quadrature.hpp"

#include <cmath>

namespace geoclt {

Vec uniform_direction(int d, SeedStream& stream)
{
    Vec v(d);
    double n2 = 0.0;
    do {
        for (int k = 0; k < d; ++k)
            v(k) = stream.normal();
        n2 = v.squaredNorm();
    } while (n2 < 1e-300);
    return v / std::sqrt(n2);
}

BoundarySampler::BoundarySampler(const SupportBody& K, const GeometryWeights& weights, int grid)
    : K_(&K), weights_(&weights)
{
    const int d = K.dim();
    if (grid <= 0)
        grid = d == 2 ? 3600 : 4000;
    double best = 0.0;
    for (const Vec& u : SupportBody::check_directions(d, grid)) {
        const BoundaryPoint p = boundary_point_from_normal(K, u);
        const double v = weights.sigma_density(p) * p.area_jacobian;
        if (!(v > 0.0) || !std::isfinite(v))
            throw ModelError("boundary density must be positive and finite");
        best = std::max(best, v);
    }
    envelope_ = 1.2 * best;
}

std::vector<BoundaryPoint> BoundarySampler::sample(SeedStream& stream, int n) const
{
    if (n < 1)
        throw InputError("sample size must be positive");
    const int d = K_->dim();
    std::vector<BoundaryPoint> out;
    out.reserve(n);
    long proposals = 0;
    while (static_cast<int>(out.size()) < n) {
        const Vec u = uniform_direction(d, stream);
        ++proposals;
        BoundaryPoint p = boundary_point_from_normal(*K_, u);
        const double ratio = weights_->sigma_density(p) * p.area_jacobian / envelope_;
        if (ratio > 1.0)
            throw ModelError("rejection envelope exceeded; the density varies faster than the envelope grid resolves");
        if (stream.uniform() < ratio)
            out.push_back(std::move(p));
        if (proposals >= 100000 && static_cast<double>(out.size()) < 1e-4 * proposals)
            throw ConfigError("boundary sampler acceptance rate below 1e-4");
    }
    return out;
}

std::vector<BoundaryPoint> sample_boundary(const SupportBody& K, const GeometryWeights& weights, SeedStream& stream,
                                           int n)
{
    return BoundarySampler(K, weights).sample(stream, n);
}

std::vector<Vec> sample_simplex(const std::vector<Vec>& simplex, SeedStream& stream, int n)
{
    if (simplex.empty())
        throw InputError("empty simplex");
    const int d = static_cast<int>(simplex.front().size());
    if (static_cast<int>(simplex.size()) != d + 1)
        throw InputError("simplex needs d+1 vertices");
    SimplexCols S(d, d + 1);
    for (int i = 0; i <= d; ++i)
        S.col(i) = simplex[i];
    double scale = 0.0;
    for (const Vec& v : simplex)
        scale = std::max(scale, (v - simplex.front()).norm());
    if (!(simplex_measure(S) > tolerance() * std::pow(std::max(scale, 1e-300), d)))
        throw DomainError("degenerate simplex");
    std::vector<Vec> out;
    out.reserve(n);
    Vec lam(d + 1);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k <= d; ++k)
            lam(k) = stream.exponential();
        lam /= lam.sum();
        out.push_back(S * lam);
    }
    return out;
}

} // namespace geoclt
