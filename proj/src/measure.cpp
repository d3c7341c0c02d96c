#include "geoclt/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace geoclt {

void QuadratureSpec::validate() const
{
    if (sphere_nodes <= 0 || simplex_degree <= 0 || max_refine <= 0)
        throw ConfigError("quadrature: sphere_nodes, simplex_degree and max_refine must be positive");
    if (!(rel_tol > 0.0 && rel_tol < 1.0))
        throw ConfigError("quadrature: rel_tol must lie in (0, 1)");
}

nlohmann::json QuadratureSpec::to_json() const
{
    return {{"sphere_nodes", sphere_nodes},
            {"simplex_degree", simplex_degree},
            {"max_refine", max_refine},
            {"rel_tol", rel_tol},
            {"sphere_method", sphere_method == SphereMethod::Exact ? "exact" : "grid"},
            {"richardson", richardson},
            {"rotation_seed", rotation_seed}};
}

QuadratureSpec QuadratureSpec::from_json(const nlohmann::json& j)
{
    QuadratureSpec q;
    q.sphere_nodes = j.value("sphere_nodes", q.sphere_nodes);
    q.simplex_degree = j.value("simplex_degree", q.simplex_degree);
    q.max_refine = j.value("max_refine", q.max_refine);
    q.rel_tol = j.value("rel_tol", q.rel_tol);
    q.richardson = j.value("richardson", q.richardson);
    q.rotation_seed = j.value("rotation_seed", q.rotation_seed);
    const std::string m = j.value("sphere_method", std::string("exact"));
    if (m == "exact")
        q.sphere_method = SphereMethod::Exact;
    else if (m == "grid")
        q.sphere_method = SphereMethod::Grid;
    else
        throw ConfigError("quadrature: unknown sphere_method '" + m + "'");
    q.validate();
    return q;
}

namespace {

SimplexCols cell_matrix(const std::vector<Vec>& pts, const Cell& c)
{
    SimplexCols s(pts.front().size(), static_cast<Eigen::Index>(c.size()));
    for (std::size_t i = 0; i < c.size(); ++i)
        s.col(static_cast<Eigen::Index>(i)) = pts[c[i]];
    return s;
}

void require_origin(const Polytope& P)
{
    if (!P.contains_origin())
        throw DomainError("dual volume needs the origin in the interior");
}

} // namespace

double weighted_volume(const Polytope& P, const PointFunction& phi, const QuadratureSpec& q)
{
    const Triangulation T = triangulate(P);
    std::vector<SimplexCols> cells;
    cells.reserve(T.simplices.size());
    for (const Cell& c : T.simplices)
        cells.push_back(cell_matrix(T.points, c));
    return integrate_simplices(cells, phi, q.simplex_degree, q.max_refine, q.rel_tol).value;
}

double dual_volume(const Polytope& P, double j, const QuadratureSpec& q)
{
    require_origin(P);
    if (j == 0.0)
        throw InputError("dual volume order j must be nonzero");
    const int d = P.dim();
    if (q.sphere_method == SphereMethod::Grid)
        return dual_volume_grid(P, j, q);
    // Over a facet at distance b, dS(u) = b |x|^-d dA(x) and rho(u) = |x|.
    const double e = j - d;
    const PointFunction f = [e](const Vec& x) { return std::pow(x.norm(), e); };
    KahanSum s;
    for (std::size_t fi = 0; fi < P.facets().size(); ++fi) {
        std::vector<SimplexCols> cells;
        for (const Cell& c : facet_cells(P, fi))
            cells.push_back(cell_matrix(P.vertices(), c));
        const double I = integrate_simplices(cells, f, q.simplex_degree, q.max_refine, q.rel_tol).value;
        s.add(P.facets()[fi].offset * I);
    }
    return s.value() / d;
}

double dual_volume_grid(const Polytope& P, double j, const QuadratureSpec& q)
{
    require_origin(P);
    if (j == 0.0)
        throw InputError("dual volume order j must be nonzero");
    const int d = P.dim();
    const double avg = sphere_average(
        d, [&](const Vec& u) { return std::pow(radial_function(P, u), j); }, q.sphere_nodes, q.richardson,
        q.rotation_seed);
    return kappa(d) * avg;
}

double dual_volume_complement(const Polytope& P, double j, const QuadratureSpec& q)
{
    require_origin(P);
    if (P.dim() != 2)
        throw InputError("complement form is implemented for d = 2");
    if (!(j < 0.0))
        throw InputError("complement form needs j < 0");
    // Outer integral over the angle, piecewise between vertex directions;
    // inner integral over r in [rho, inf) with r = rho / s.
    std::vector<double> angles;
    for (const Vec& v : P.vertices())
        angles.push_back(std::atan2(v(1), v(0)));
    std::sort(angles.begin(), angles.end());
    angles.push_back(angles.front() + 2.0 * std::numbers::pi);
    const double inner = integrate_interval([j](double s) { return std::pow(s, -j - 1.0); }, 0.0, 1.0, q.rel_tol);
    auto radial = [&](double a) {
        const double rho = radial_function(P, (Vec(2) << std::cos(a), std::sin(a)).finished());
        return std::pow(rho, j) * inner;
    };
    KahanSum s;
    for (std::size_t i = 0; i + 1 < angles.size(); ++i)
        if (angles[i + 1] > angles[i])
            s.add(integrate_interval(radial, angles[i], angles[i + 1], q.rel_tol));
    return std::abs(j) / 2.0 * s.value();
}

double mean_width(const Polytope& P, const QuadratureSpec& q)
{
    const int d = P.dim();
    if (P.vertices().empty())
        throw DomainError("mean width of an empty polytope");
    if (q.sphere_method == SphereMethod::Grid || d >= 4)
        return mean_width_grid(P, q);
    if (d == 2) {
        KahanSum perimeter;
        for (std::size_t fi = 0; fi < P.facets().size(); ++fi)
            perimeter.add(facet_area(P, fi));
        return perimeter.value() / std::numbers::pi;
    }
    // d = 3: W = (1 / 4 pi) sum over edges of length times exterior dihedral angle.
    const auto inc = P.vertex_facets();
    std::map<std::pair<int, int>, std::vector<int>> shared;
    for (std::size_t v = 0; v < inc.size(); ++v)
        for (std::size_t a = 0; a < inc[v].size(); ++a)
            for (std::size_t b = a + 1; b < inc[v].size(); ++b)
                shared[std::minmax(inc[v][a], inc[v][b])].push_back(static_cast<int>(v));
    KahanSum s;
    for (const auto& [fg, verts] : shared) {
        if (verts.size() < 2)
            continue;
        double len = 0.0;
        for (std::size_t a = 0; a < verts.size(); ++a)
            for (std::size_t b = a + 1; b < verts.size(); ++b)
                len = std::max(len, (P.vertices()[verts[a]] - P.vertices()[verts[b]]).norm());
        const double c = std::clamp(P.facets()[fg.first].normal.dot(P.facets()[fg.second].normal), -1.0, 1.0);
        s.add(len * std::acos(c));
    }
    return s.value() / (4.0 * std::numbers::pi);
}

double mean_width_grid(const Polytope& P, const QuadratureSpec& q)
{
    return sphere_average(
        P.dim(), [&](const Vec& u) { return support_function(P, u) + support_function(P, -u); }, q.sphere_nodes,
        q.richardson, q.rotation_seed);
}

namespace {

double width_from_dual_points(std::vector<Vec> pts, const Polytope& L, const QuadratureSpec& q)
{
    if (!L.contains_origin())
        throw DomainError("window must contain the origin in its interior");
    for (const Facet& f : L.facets())
        pts.push_back(f.normal / f.offset);
    const Polytope Q = convex_hull(pts, L.dim());
    return width_constant(L.dim()) * dual_volume(Q, -1.0, q);
}

} // namespace

double mean_width_dual(const Polytope& P, const Polytope& L, const QuadratureSpec& q)
{
    if (!P.contains_origin())
        throw DomainError("polytope must contain the origin in its interior");
    std::vector<Vec> pts;
    for (const Facet& f : P.facets())
        pts.push_back(f.normal / f.offset);
    return width_from_dual_points(std::move(pts), L, q);
}

double mean_width_dual(const std::vector<Halfspace>& P, const Polytope& L, const QuadratureSpec& q)
{
    std::vector<Vec> pts;
    for (const Halfspace& h : P) {
        if (!(h.offset > 0.0))
            throw DomainError("half-space must contain the origin in its interior");
        pts.push_back(h.normal / h.offset);
    }
    return width_from_dual_points(std::move(pts), L, q);
}

} // namespace geoclt
