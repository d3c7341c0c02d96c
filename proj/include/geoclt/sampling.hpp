#pragma once

#include "geoclt/geometries.hpp"
#include "geoclt/rng.hpp"

#include <vector>

namespace geoclt {

/// Uniform direction on S^{d-1}.
Vec uniform_direction(int d, SeedStream& stream);

/**
 * Rejection sampler for sigma on the boundary of K. Proposals are uniform
 * normals u; a proposal is accepted with probability
 * sigma_density(x(u)) * area_jacobian(u) / M, where M is 1.2 times the
 * maximum of that product over a direction grid.
 */
class BoundarySampler {
  public:
    BoundarySampler(const SupportBody& K, const GeometryWeights& weights, int grid = 0);

    /// n i.i.d. draws. Throws ConfigError if the acceptance rate falls below
    /// 1e-4, ModelError if a proposal exceeds the envelope.
    std::vector<BoundaryPoint> sample(SeedStream& stream, int n) const;

    double envelope() const { return envelope_; }

  private:
    const SupportBody* K_;
    const GeometryWeights* weights_;
    double envelope_ = 0.0;
};

std::vector<BoundaryPoint> sample_boundary(const SupportBody& K, const GeometryWeights& weights, SeedStream& stream,
                                           int n);

/// Uniform points in a nondegenerate simplex (d+1 vertices in R^d) from
/// normalized exponential spacings.
std::vector<Vec> sample_simplex(const std::vector<Vec>& simplex, SeedStream& stream, int n);

} // namespace geoclt
