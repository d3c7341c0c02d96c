#pragma once

#include "geoclt/bodies.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

namespace geoclt {

/**
 * Interior density phi (w.r.t. Lebesgue measure) and unnormalized boundary
 * density sigma_density (w.r.t. (d-1)-Hausdorff measure) of a geometry.
 * normalizer is the total boundary mass, so sigma = sigma_density / normalizer
 * is a probability measure on the boundary of K.
 */
struct GeometryWeights {
    std::string label;
    std::function<double(const Vec&)> phi;
    std::function<double(const BoundaryPoint&)> sigma_density;
    double normalizer = 0.0;
    /// phi is identically phi_value (enables the exact volume path).
    bool phi_constant = false;
    double phi_value = 1.0;
};

enum class FinslerKind { Hilbert, Funk };
enum class VolumeKind { Busemann, HolmesThompson };
enum class RiemannianKind { Klein, Gnomonic };

/// A definition of volume on normed spaces plus its quadrature resolution
/// (direction-grid size; 0 picks 256 in dimension 2 and 10^4 in dimension 3).
struct VolumeDefinition {
    VolumeKind kind = VolumeKind::Busemann;
    int nodes = 0;
};

/// Hilbert or Funk norm of a convex domain omega.
class FinslerNorm {
  public:
    FinslerNorm(SupportBody omega, FinslerKind kind) : omega_(std::move(omega)), kind_(kind) {}

    const SupportBody& omega() const { return omega_; }
    FinslerKind kind() const { return kind_; }
    int dim() const { return omega_.dim(); }

    /// F(x, v); F(x, 0) = 0.
    double operator()(const Vec& x, const Vec& v) const;

  private:
    SupportBody omega_;
    FinslerKind kind_;
};

/// (t_plus, t_minus) with x + t_plus v and x - t_minus v on the boundary of
/// omega. Closed form for balls and ellipsoids, bisection otherwise.
/// Throws DomainError unless x is interior, InputError for v = 0.
std::pair<double, double> t_plus_minus(const SupportBody& omega, const Vec& x, const Vec& v);

double finsler_norm(const FinslerNorm& F, const Vec& x, const Vec& v);

/// Adaptive line integral of F along the segment [x, y].
double finsler_distance(const FinslerNorm& F, const Vec& x, const Vec& y);

/// Cross-ratio form of the Hilbert distance, 1/2 log(|a-y| |b-x| / (|a-x| |b-y|))
/// with a, x, y, b in that order on the chord through x and y.
double hilbert_distance(const SupportBody& omega, const Vec& x, const Vec& y);

/// Metric tensor of the Klein or gnomonic model at x.
Mat metric_tensor(RiemannianKind kind, const Vec& x);

/// Density of a volume definition for the norm w -> norm(w) on R^k
/// (Euclidean norms give 1).
double normed_space_density(const std::function<double(const Vec&)>& norm, int k, const VolumeDefinition& def);

/// Lebesgue weights phi = 1 and Hausdorff boundary measure.
GeometryWeights euclidean_weights(const SupportBody& K);

/// Klein: K must lie in the open unit ball. Gnomonic: any K.
GeometryWeights riemannian_weights(RiemannianKind kind, const SupportBody& K);

struct FinslerOptions {
    bool cache = true;          ///< Tensor Lagrange interpolant of phi over K's bounding box.
    int cache_cells = 0;        ///< Cells per axis (0: 128 for d = 2, no cache for d >= 3).
    double cache_tol = 1e-9;    ///< Max relative error at random check points.
    int check_points = 64;
};

/// Finsler densities; voldef_d gives phi, voldef_dminus1 gives sigma_density.
GeometryWeights finsler_weights(const FinslerNorm& F, const VolumeDefinition& voldef_d,
                                const VolumeDefinition& voldef_dminus1, const SupportBody& K,
                                const FinslerOptions& opts = {});

/// Total boundary mass: integral over the normal sphere of sigma_density * area_jacobian.
double boundary_mass(const SupportBody& K, const std::function<double(const BoundaryPoint&)>& density,
                     int nodes = 0);

/// {geometry, volume_def, volume_def_boundary?, omega?, nodes?, cache?}
struct GeometrySpec {
    std::string geometry = "euclidean";
    VolumeDefinition volume_def;
    VolumeDefinition volume_def_boundary;
    std::optional<nlohmann::json> omega;
    FinslerOptions finsler;

    static GeometrySpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

GeometryWeights make_weights(const GeometrySpec& spec, const SupportBody& K);

} // namespace geoclt
