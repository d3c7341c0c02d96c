#include "geoclt/hull.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

namespace geoclt {

namespace {

template <int D>
class IncrementalHull {
  public:
    using Pt = Eigen::Matrix<double, D, 1>;

    struct Face {
        std::array<int, D> v{};
        std::array<int, D> nb{};
        Pt n;
        double b = 0.0;
        std::vector<int> outside;
        bool alive = true;
        int seen = -1;
        bool visible = false;
    };

    explicit IncrementalHull(const std::vector<Vec>& input)
    {
        pts_.reserve(input.size());
        double scale = 0.0;
        for (const Vec& p : input) {
            if (p.size() != D)
                throw InputError("hull: point has wrong dimension");
            pts_.push_back(p);
            scale = std::max(scale, p.cwiseAbs().maxCoeff());
        }
        eps_ = tolerance() * std::max(scale, 1e-300);
    }

    HullResult run()
    {
        if (static_cast<int>(pts_.size()) < D + 1)
            throw DomainError("hull needs at least d+1 points, got " + std::to_string(pts_.size()));
        initial_simplex();
        std::vector<int> stack;
        for (int fi = 0; fi < static_cast<int>(faces_.size()); ++fi)
            if (!faces_[fi].outside.empty())
                stack.push_back(fi);
        while (!stack.empty()) {
            const int fi = stack.back();
            stack.pop_back();
            if (!faces_[fi].alive || faces_[fi].outside.empty())
                continue;
            int best = -1;
            double best_dist = -INFINITY;
            for (int p : faces_[fi].outside) {
                const double dd = dist(faces_[fi], p);
                if (dd > best_dist) {
                    best_dist = dd;
                    best = p;
                }
            }
            insert(fi, best, stack);
        }
        return collect();
    }

  private:
    double dist(const Face& f, int p) const { return f.n.dot(pts_[p]) - f.b; }

    void set_plane(Face& f) const
    {
        Eigen::Matrix<double, D - 1, D> M;
        for (int i = 1; i < D; ++i)
            M.row(i - 1) = (pts_[f.v[i]] - pts_[f.v[0]]).transpose();
        Pt n;
        for (int k = 0; k < D; ++k) {
            Eigen::Matrix<double, D - 1, D - 1> minor;
            for (int c = 0, cc = 0; c < D; ++c) {
                if (c == k)
                    continue;
                minor.col(cc++) = M.col(c);
            }
            const double det = minor.determinant();
            n(k) = (k % 2 == 0) ? det : -det;
        }
        n.normalize();
        double b = 0.0;
        for (int i = 0; i < D; ++i)
            b += n.dot(pts_[f.v[i]]);
        b /= D;
        if (n.dot(interior_) > b) {
            n = -n;
            b = -b;
        }
        f.n = n;
        f.b = b;
    }

    void initial_simplex()
    {
        const int npts = static_cast<int>(pts_.size());
        std::vector<int> chosen;
        int first = 0;
        for (int i = 1; i < npts; ++i)
            if (pts_[i](0) < pts_[first](0))
                first = i;
        chosen.push_back(first);
        std::vector<Pt> basis;
        for (int k = 1; k <= D; ++k) {
            int best = -1;
            double best_d = -1.0;
            Pt best_r;
            for (int i = 0; i < npts; ++i) {
                Pt r = pts_[i] - pts_[first];
                for (const Pt& e : basis)
                    r -= r.dot(e) * e;
                const double dd = r.norm();
                if (dd > best_d) {
                    best_d = dd;
                    best = i;
                    best_r = r;
                }
            }
            if (best_d <= eps_)
                throw DomainError("degenerate hull input: affine rank " + std::to_string(k - 1) +
                                  " < dimension " + std::to_string(D));
            chosen.push_back(best);
            basis.push_back(best_r / best_d);
        }
        interior_.setZero();
        for (int c : chosen)
            interior_ += pts_[c];
        interior_ /= D + 1;

        // Face k omits chosen[k]; faces k and j share the ridge omitting both.
        faces_.resize(D + 1);
        for (int k = 0; k <= D; ++k) {
            Face& f = faces_[k];
            int pos = 0;
            for (int j = 0; j <= D; ++j) {
                if (j == k)
                    continue;
                f.v[pos] = chosen[j];
                f.nb[pos] = j;
                ++pos;
            }
            set_plane(f);
        }
        std::vector<char> used(npts, 0);
        for (int c : chosen)
            used[c] = 1;
        for (int i = 0; i < npts; ++i) {
            if (used[i])
                continue;
            for (Face& f : faces_) {
                if (dist(f, i) > eps_) {
                    f.outside.push_back(i);
                    break;
                }
            }
        }
    }

    void insert(int start, int p, std::vector<int>& stack)
    {
        ++stamp_;
        std::vector<int> visible{start};
        faces_[start].seen = stamp_;
        faces_[start].visible = true;
        for (std::size_t i = 0; i < visible.size(); ++i) {
            const Face f = faces_[visible[i]];
            for (int j = 0; j < D; ++j) {
                Face& g = faces_[f.nb[j]];
                if (g.seen == stamp_)
                    continue;
                g.seen = stamp_;
                g.visible = dist(g, p) > eps_;
                if (g.visible)
                    visible.push_back(f.nb[j]);
            }
        }

        struct RidgeSlot {
            std::array<int, D - 1> key;
            int face;
            int pos;
        };
        std::vector<RidgeSlot> open;
        std::vector<int> created;
        for (int fid : visible) {
            for (int j = 0; j < D; ++j) {
                const int nid = faces_[fid].nb[j];
                if (faces_[nid].visible && faces_[nid].seen == stamp_)
                    continue;
                Face g;
                g.v = faces_[fid].v;
                g.v[j] = p;
                g.nb.fill(-1);
                g.nb[j] = nid;
                set_plane(g);
                const int gid = static_cast<int>(faces_.size());
                faces_.push_back(std::move(g));
                created.push_back(gid);
                for (int k = 0; k < D; ++k)
                    if (faces_[nid].nb[k] == fid)
                        faces_[nid].nb[k] = gid;
                for (int q = 0; q < D; ++q) {
                    if (q == j)
                        continue;
                    std::array<int, D - 1> key{};
                    for (int r = 0, rr = 0; r < D; ++r)
                        if (r != q)
                            key[rr++] = faces_[gid].v[r];
                    std::sort(key.begin(), key.end());
                    auto it = std::find_if(open.begin(), open.end(),
                                           [&](const RidgeSlot& s) { return s.key == key; });
                    if (it != open.end()) {
                        faces_[gid].nb[q] = it->face;
                        faces_[it->face].nb[it->pos] = gid;
                        *it = open.back();
                        open.pop_back();
                    } else {
                        open.push_back({key, gid, q});
                    }
                }
            }
        }
        if (!open.empty())
            throw NumericalError("hull: horizon is not a closed ridge cycle");

        for (int fid : visible) {
            Face& f = faces_[fid];
            for (int o : f.outside) {
                if (o == p)
                    continue;
                for (int gid : created) {
                    if (dist(faces_[gid], o) > eps_) {
                        faces_[gid].outside.push_back(o);
                        break;
                    }
                }
            }
            f.alive = false;
            f.visible = false;
            std::vector<int>().swap(f.outside);
        }
        for (int gid : created)
            if (!faces_[gid].outside.empty())
                stack.push_back(gid);
    }

    HullResult collect() const
    {
        const int nf = static_cast<int>(faces_.size());
        std::vector<int> parent(nf);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&parent](int x) {
            while (parent[x] != x)
                x = parent[x] = parent[parent[x]];
            return x;
        };
        auto opposite = [](const Face& f, const Face& g) {
            for (int a : f.v)
                if (std::find(g.v.begin(), g.v.end(), a) == g.v.end())
                    return a;
            return -1;
        };
        for (int fi = 0; fi < nf; ++fi) {
            const Face& f = faces_[fi];
            if (!f.alive)
                continue;
            for (int gi : f.nb) {
                if (gi < fi)
                    continue;
                const Face& g = faces_[gi];
                const int a = opposite(g, f);
                const int b = opposite(f, g);
                if (a < 0 || b < 0)
                    continue;
                if (std::abs(dist(f, a)) <= eps_ && std::abs(dist(g, b)) <= eps_)
                    parent[find(gi)] = find(fi);
            }
        }

        // Group faces into merged facets.
        std::vector<int> group_of(nf, -1);
        std::vector<std::vector<int>> groups;
        HullResult out;
        out.dim = D;
        for (int fi = 0; fi < nf; ++fi) {
            if (!faces_[fi].alive)
                continue;
            out.boundary.emplace_back(faces_[fi].v.begin(), faces_[fi].v.end());
            const int root = find(fi);
            if (group_of[root] < 0) {
                group_of[root] = static_cast<int>(groups.size());
                groups.emplace_back();
            }
            groups[group_of[root]].push_back(fi);
        }

        std::vector<Facet> facets;
        facets.reserve(groups.size());
        for (const auto& members : groups) {
            Facet facet;
            Pt n = Pt::Zero();
            std::vector<int> verts;
            for (int fi : members) {
                n += faces_[fi].n;
                verts.insert(verts.end(), faces_[fi].v.begin(), faces_[fi].v.end());
            }
            std::sort(verts.begin(), verts.end());
            verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
            n.normalize();
            double b = 0.0;
            for (int v : verts)
                b += n.dot(pts_[v]);
            b /= static_cast<double>(verts.size());
            facet.normal = n;
            facet.offset = b;
            facet.vertices = std::move(verts);
            facets.push_back(std::move(facet));
        }

        // Extreme-point filter: a point in the relative interior of a face of
        // dimension >= 1 lies on facets whose normals span fewer than D dimensions.
        std::vector<std::vector<int>> incident(pts_.size());
        for (int g = 0; g < static_cast<int>(facets.size()); ++g)
            for (int v : facets[g].vertices)
                incident[v].push_back(g);
        std::vector<char> extreme(pts_.size(), 0);
        for (std::size_t v = 0; v < pts_.size(); ++v) {
            const auto& inc = incident[v];
            if (static_cast<int>(inc.size()) < D)
                continue;
            if (D <= 3) {
                extreme[v] = 1;
                continue;
            }
            Mat N(D, static_cast<Eigen::Index>(inc.size()));
            for (std::size_t k = 0; k < inc.size(); ++k)
                N.col(static_cast<Eigen::Index>(k)) = facets[inc[k]].normal;
            Eigen::FullPivLU<Mat> lu(N);
            lu.setThreshold(1e-9);
            extreme[v] = lu.rank() == D ? 1 : 0;
        }
        for (Facet& f : facets)
            std::erase_if(f.vertices, [&](int v) { return !extreme[v]; });
        for (std::size_t v = 0; v < pts_.size(); ++v)
            if (extreme[v])
                out.vertex_ids.push_back(static_cast<int>(v));
        out.facets = std::move(facets);
        return out;
    }

    std::vector<Pt> pts_;
    std::vector<Face> faces_;
    Pt interior_;
    double eps_ = 0.0;
    int stamp_ = 0;
};

template <int D>
HullResult run_hull(const std::vector<Vec>& points)
{
    IncrementalHull<D> h(points);
    return h.run();
}

double factorial(int k)
{
    double f = 1.0;
    for (int i = 2; i <= k; ++i)
        f *= i;
    return f;
}

} // namespace

double simplex_volume(const std::vector<Vec>& pts, const Cell& cell)
{
    const int k = static_cast<int>(cell.size()) - 1;
    if (k <= 0)
        return 0.0;
    const Vec& base = pts[cell[0]];
    Mat E(base.size(), k);
    for (int i = 1; i <= k; ++i)
        E.col(i - 1) = pts[cell[i]] - base;
    double g;
    if (E.rows() == k)
        g = std::abs(E.determinant());
    else
        g = std::abs(Eigen::HouseholderQR<Mat>(E).matrixQR().diagonal().prod());
    return g / factorial(k);
}

double Triangulation::volume() const
{
    KahanSum s;
    for (const Cell& c : simplices)
        s.add(simplex_volume(points, c));
    return s.value();
}

HullResult hull_indices(const std::vector<Vec>& points, int dim)
{
    switch (dim) {
    case 2:
        return run_hull<2>(points);
    case 3:
        return run_hull<3>(points);
    case 4:
        return run_hull<4>(points);
    case 5:
        return run_hull<5>(points);
    case 6:
        return run_hull<6>(points);
    default:
        throw InputError("hull supports dimensions 2..6, got " + std::to_string(dim));
    }
}

Polytope convex_hull(const std::vector<Vec>& points, int dim)
{
    HullResult r = hull_indices(points, dim);
    std::vector<int> local(points.size(), -1);
    std::vector<Vec> verts;
    verts.reserve(r.vertex_ids.size());
    for (int id : r.vertex_ids) {
        local[id] = static_cast<int>(verts.size());
        verts.push_back(points[id]);
    }
    for (Facet& f : r.facets)
        for (int& v : f.vertices)
            v = local[v];
    return Polytope(dim, std::move(verts), std::move(r.facets));
}

Polytope hull_with_body(const std::vector<Vec>& points, const Polytope& T)
{
    std::vector<Vec> all = points;
    all.insert(all.end(), T.vertices().begin(), T.vertices().end());
    return convex_hull(all, T.dim());
}

Polytope halfspace_intersection(const std::vector<Halfspace>& halfspaces, const Polytope& window,
                                std::optional<Vec> interior)
{
    const int d = window.dim();
    std::vector<Halfspace> all = halfspaces;
    for (const Facet& f : window.facets())
        all.push_back({f.normal, f.offset});
    for (const Halfspace& h : all)
        if (h.normal.size() != d)
            throw InputError("half-space has wrong dimension");

    auto strictly_inside = [&](const Vec& c) {
        for (const Halfspace& h : all) {
            const double nn = h.normal.norm();
            if ((h.offset - h.normal.dot(c)) / nn <= tolerance() * (1.0 + std::abs(h.offset) / nn))
                return false;
        }
        return true;
    };
    Vec c;
    if (interior) {
        if (!strictly_inside(*interior))
            throw DomainError("supplied point is not interior to the half-space intersection");
        c = *interior;
    } else if (strictly_inside(Vec::Zero(d))) {
        c = Vec::Zero(d);
    } else if (strictly_inside(window.vertex_centroid())) {
        c = window.vertex_centroid();
    } else {
        throw DomainError("half-space intersection: empty, or no interior point found");
    }

    std::vector<Vec> dual;
    dual.reserve(all.size());
    for (const Halfspace& h : all)
        dual.push_back(h.normal / (h.offset - h.normal.dot(c)));
    const Polytope Q = convex_hull(dual, d);
    return polar_polytope(Q).translated(c);
}

std::vector<Cell> facet_cells(const Polytope& P, std::size_t facet)
{
    const int d = P.dim();
    const Facet& f = P.facets().at(facet);
    if (static_cast<int>(f.vertices.size()) == d)
        return {f.vertices};
    const Mat E = complement_basis(f.normal);
    const Vec& base = P.vertices()[f.vertices[0]];
    std::vector<Vec> local;
    local.reserve(f.vertices.size());
    for (int v : f.vertices)
        local.push_back(E.transpose() * (P.vertices()[v] - base));
    if (d - 1 == 1) {
        auto [lo, hi] = std::minmax_element(local.begin(), local.end(),
                                            [](const Vec& a, const Vec& b) { return a(0) < b(0); });
        return {{f.vertices[lo - local.begin()], f.vertices[hi - local.begin()]}};
    }
    const HullResult r = hull_indices(local, d - 1);
    const int apex = r.vertex_ids.front();
    std::vector<Cell> cells;
    for (const Cell& c : r.boundary) {
        if (std::find(c.begin(), c.end(), apex) != c.end())
            continue;
        Cell cell;
        cell.reserve(d);
        cell.push_back(f.vertices[apex]);
        for (int v : c)
            cell.push_back(f.vertices[v]);
        cells.push_back(std::move(cell));
    }
    return cells;
}

double facet_area(const Polytope& P, std::size_t facet)
{
    KahanSum s;
    for (const Cell& c : facet_cells(P, facet))
        s.add(simplex_volume(P.vertices(), c));
    return s.value();
}

double polytope_volume(const Polytope& P)
{
    KahanSum s;
    for (std::size_t i = 0; i < P.facets().size(); ++i)
        s.add(P.facets()[i].offset * facet_area(P, i));
    return s.value() / P.dim();
}

Triangulation triangulate(const Polytope& P)
{
    const int d = P.dim();
    if (static_cast<int>(P.vertices().size()) < d + 1 || static_cast<int>(P.facets().size()) < d + 1)
        throw DomainError("triangulate: polytope is not full-dimensional");
    Triangulation T;
    T.dim = d;
    T.points = P.vertices();
    if (static_cast<int>(P.vertices().size()) == d + 1) {
        Cell all(d + 1);
        std::iota(all.begin(), all.end(), 0);
        T.simplices.push_back(std::move(all));
    } else {
        const int apex = static_cast<int>(T.points.size());
        T.points.push_back(P.vertex_centroid());
        for (std::size_t fi = 0; fi < P.facets().size(); ++fi) {
            for (Cell c : facet_cells(P, fi)) {
                c.push_back(apex);
                T.simplices.push_back(std::move(c));
            }
        }
    }
    if (!(T.volume() > 0.0))
        throw DomainError("triangulate: polytope is not full-dimensional");
    return T;
}

} // namespace geoclt
