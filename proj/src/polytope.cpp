#include "geoclt/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace geoclt {

namespace {

double slack(double tol, double offset) { return tol * (1.0 + std::abs(offset)); }

int affine_rank(const std::vector<Vec>& pts, const std::vector<int>& idx)
{
    if (idx.size() < 2)
        return 0;
    const Vec& base = pts[idx[0]];
    const int d = static_cast<int>(base.size());
    Mat M(d, static_cast<Eigen::Index>(idx.size() - 1));
    for (std::size_t i = 1; i < idx.size(); ++i)
        M.col(static_cast<Eigen::Index>(i - 1)) = pts[idx[i]] - base;
    Eigen::FullPivLU<Mat> lu(M);
    lu.setThreshold(1e-10);
    return static_cast<int>(lu.rank());
}

} // namespace

Polytope::Polytope(int dim, std::vector<Vec> vertices, std::vector<Facet> facets)
    : dim_(dim), vertices_(std::move(vertices)), facets_(std::move(facets))
{
    if (dim < 1)
        throw InputError("polytope dimension must be positive");
    const double tol = tolerance();
    for (const Vec& v : vertices_)
        if (v.size() != dim)
            throw InputError("vertex has wrong dimension");
    contains_origin_ = !facets_.empty();
    for (Facet& f : facets_) {
        if (f.normal.size() != dim)
            throw InputError("facet normal has wrong dimension");
        const double nn = f.normal.norm();
        if (std::abs(nn - 1.0) > 1e-8)
            throw InputError("facet normal must be a unit vector");
        if (static_cast<int>(f.vertices.size()) < dim)
            throw DomainError("degenerate facet: fewer than d vertices");
        for (int vi : f.vertices) {
            if (vi < 0 || vi >= static_cast<int>(vertices_.size()))
                throw InputError("facet references a missing vertex");
            const double gap = f.normal.dot(vertices_[vi]) - f.offset;
            if (std::abs(gap) > slack(tol, f.offset) * 10.0)
                throw DomainError("facet incidence is not tight");
        }
        if (dim == 2) {
            if ((vertices_[f.vertices[0]] - vertices_[f.vertices[1]]).norm() <= tol)
                throw DomainError("degenerate facet: coincident vertices");
        } else if (affine_rank(vertices_, f.vertices) < dim - 1) {
            throw DomainError("degenerate facet: vertices not affinely spanning a hyperplane");
        }
        if (!(f.offset > slack(tol, 0.0)))
            contains_origin_ = false;
    }
}

void Polytope::validate() const
{
    const double tol = tolerance();
    for (std::size_t fi = 0; fi < facets_.size(); ++fi) {
        const Facet& f = facets_[fi];
        for (std::size_t vi = 0; vi < vertices_.size(); ++vi)
            if (f.normal.dot(vertices_[vi]) > f.offset + slack(tol, f.offset))
                throw DomainError("vertex " + std::to_string(vi) + " violates facet " + std::to_string(fi));
    }
}

bool Polytope::contains(const Vec& x, double tol) const
{
    for (const Facet& f : facets_)
        if (f.normal.dot(x) > f.offset + slack(tol, f.offset))
            return false;
    return true;
}

std::vector<std::vector<int>> Polytope::vertex_facets() const
{
    std::vector<std::vector<int>> inc(vertices_.size());
    for (std::size_t fi = 0; fi < facets_.size(); ++fi)
        for (int v : facets_[fi].vertices)
            inc[v].push_back(static_cast<int>(fi));
    return inc;
}

Vec Polytope::vertex_centroid() const
{
    Vec c = Vec::Zero(dim_);
    for (const Vec& v : vertices_)
        c += v;
    return c / static_cast<double>(std::max<std::size_t>(1, vertices_.size()));
}

Polytope Polytope::translated(const Vec& shift) const
{
    std::vector<Vec> verts = vertices_;
    for (Vec& v : verts)
        v += shift;
    std::vector<Facet> facets = facets_;
    for (Facet& f : facets)
        f.offset += f.normal.dot(shift);
    return Polytope(dim_, std::move(verts), std::move(facets));
}

Polytope Polytope::scaled(double lambda) const
{
    if (!(lambda > 0.0))
        throw InputError("scale factor must be positive");
    std::vector<Vec> verts = vertices_;
    for (Vec& v : verts)
        v *= lambda;
    std::vector<Facet> facets = facets_;
    for (Facet& f : facets)
        f.offset *= lambda;
    return Polytope(dim_, std::move(verts), std::move(facets));
}

nlohmann::json Polytope::to_json() const
{
    nlohmann::json j;
    j["dim"] = dim_;
    auto& jv = j["vertices"] = nlohmann::json::array();
    for (const Vec& v : vertices_)
        jv.push_back(std::vector<double>(v.data(), v.data() + v.size()));
    auto& jf = j["facets"] = nlohmann::json::array();
    for (const Facet& f : facets_)
        jf.push_back({{"normal", std::vector<double>(f.normal.data(), f.normal.data() + f.normal.size())},
                      {"offset", f.offset},
                      {"vertices", f.vertices}});
    return j;
}

Polytope Polytope::from_json(const nlohmann::json& j)
{
    const int dim = j.at("dim").get<int>();
    std::vector<Vec> verts;
    for (const auto& jv : j.at("vertices")) {
        auto c = jv.get<std::vector<double>>();
        verts.emplace_back(Eigen::Map<Vec>(c.data(), static_cast<Eigen::Index>(c.size())));
    }
    std::vector<Facet> facets;
    for (const auto& jf : j.at("facets")) {
        auto n = jf.at("normal").get<std::vector<double>>();
        Facet f;
        f.normal = Eigen::Map<Vec>(n.data(), static_cast<Eigen::Index>(n.size()));
        f.offset = jf.at("offset").get<double>();
        f.vertices = jf.at("vertices").get<std::vector<int>>();
        facets.push_back(std::move(f));
    }
    Polytope P(dim, std::move(verts), std::move(facets));
    P.validate();
    return P;
}

Polytope polar_polytope(const Polytope& P)
{
    if (!P.contains_origin())
        throw DomainError("polar body needs the origin in the interior");
    const int d = P.dim();
    // Facet (a, b) -> vertex a / b; vertex v -> facet (v / |v|, 1 / |v|).
    std::vector<Vec> verts;
    verts.reserve(P.facets().size());
    for (const Facet& f : P.facets())
        verts.push_back(f.normal / f.offset);
    const auto inc = P.vertex_facets();
    std::vector<Facet> facets;
    facets.reserve(P.vertices().size());
    for (std::size_t vi = 0; vi < P.vertices().size(); ++vi) {
        const Vec& v = P.vertices()[vi];
        const double r = v.norm();
        Facet f;
        f.normal = v / r;
        f.offset = 1.0 / r;
        f.vertices = inc[vi];
        facets.push_back(std::move(f));
    }
    return Polytope(d, std::move(verts), std::move(facets));
}

double radial_function(const Polytope& P, const Vec& u)
{
    if (!P.contains_origin())
        throw DomainError("radial function needs the origin in the interior");
    double best = INFINITY;
    for (const Facet& f : P.facets()) {
        const double c = f.normal.dot(u);
        if (c > 0.0)
            best = std::min(best, f.offset / c);
    }
    if (!std::isfinite(best))
        throw DomainError("not a body: unbounded in direction u");
    return best;
}

double support_function(const Polytope& P, const Vec& u)
{
    if (P.vertices().empty())
        throw DomainError("support function of an empty polytope");
    double best = -INFINITY;
    for (const Vec& v : P.vertices())
        best = std::max(best, v.dot(u));
    return best;
}

Polytope box_polytope(const Vec& lo, const Vec& hi)
{
    const int d = static_cast<int>(lo.size());
    if (hi.size() != d || ((hi - lo).array() <= 0.0).any())
        throw InputError("box needs lo < hi componentwise");
    std::vector<Vec> verts;
    for (int mask = 0; mask < (1 << d); ++mask) {
        Vec v(d);
        for (int k = 0; k < d; ++k)
            v(k) = (mask >> k) & 1 ? hi(k) : lo(k);
        verts.push_back(v);
    }
    std::vector<Facet> facets;
    for (int k = 0; k < d; ++k) {
        for (int side = 0; side < 2; ++side) {
            Facet f;
            f.normal = side ? unit(d, k) : Vec(-unit(d, k));
            f.offset = side ? hi(k) : -lo(k);
            for (int mask = 0; mask < (1 << d); ++mask)
                if (((mask >> k) & 1) == side)
                    f.vertices.push_back(mask);
            facets.push_back(std::move(f));
        }
    }
    return Polytope(d, std::move(verts), std::move(facets));
}

Polytope cross_polytope(int dim, double r)
{
    std::vector<Vec> verts;
    for (int k = 0; k < dim; ++k) {
        verts.push_back(r * unit(dim, k));
        verts.push_back(-r * unit(dim, k));
    }
    std::vector<Facet> facets;
    const double inv = 1.0 / std::sqrt(static_cast<double>(dim));
    for (int mask = 0; mask < (1 << dim); ++mask) {
        Facet f;
        f.normal = Vec(dim);
        for (int k = 0; k < dim; ++k) {
            const bool neg = (mask >> k) & 1;
            f.normal(k) = neg ? -inv : inv;
            f.vertices.push_back(2 * k + (neg ? 1 : 0));
        }
        f.offset = r * inv;
        facets.push_back(std::move(f));
    }
    return Polytope(dim, std::move(verts), std::move(facets));
}

double point_set_hausdorff(const std::vector<Vec>& a, const std::vector<Vec>& b)
{
    auto directed = [](const std::vector<Vec>& p, const std::vector<Vec>& q) {
        double worst = 0.0;
        for (const Vec& x : p) {
            double best = INFINITY;
            for (const Vec& y : q)
                best = std::min(best, (x - y).norm());
            worst = std::max(worst, best);
        }
        return worst;
    };
    if (a.empty() || b.empty())
        return a.empty() && b.empty() ? 0.0 : INFINITY;
    return std::max(directed(a, b), directed(b, a));
}

} // namespace geoclt
