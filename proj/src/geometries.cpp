#include "geoclt/geometries.hpp"

#include "geoclt/quadrature.hpp"
#include "geoclt/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace geoclt {

double FinslerNorm::operator()(const Vec& x, const Vec& v) const
{
    if (v.squaredNorm() == 0.0)
        return 0.0;
    const auto [tp, tm] = t_plus_minus(omega_, x, v);
    if (kind_ == FinslerKind::Funk)
        return 1.0 / tp;
    return 0.5 * (1.0 / tp + 1.0 / tm);
}

std::pair<double, double> t_plus_minus(const SupportBody& omega, const Vec& x, const Vec& v)
{
    if (x.size() != omega.dim() || v.size() != omega.dim())
        throw InputError("t_plus_minus: dimension mismatch");
    const double vn = v.norm();
    if (vn == 0.0)
        throw InputError("t_plus_minus: zero direction");
    const double r = x.norm();
    if (r > 0.0 && !(r < omega.radial(x / r)))
        throw DomainError("t_plus_minus: point is not interior to the domain");
    if (auto ex = omega.ray_exits(x, v))
        return *ex;
    auto exit_time = [&](const Vec& dir) {
        double lo = 0.0;
        double hi = 1.0 / vn;
        while (omega.contains(x + hi * dir))
            hi *= 2.0;
        for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (omega.contains(x + mid * dir))
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    return {exit_time(v), exit_time(-v)};
}

double finsler_norm(const FinslerNorm& F, const Vec& x, const Vec& v) { return F(x, v); }

double finsler_distance(const FinslerNorm& F, const Vec& x, const Vec& y)
{
    const Vec v = y - x;
    if (v.squaredNorm() == 0.0) {
        t_plus_minus(F.omega(), x, unit(F.dim(), 0));
        return 0.0;
    }
    t_plus_minus(F.omega(), y, v);
    return integrate_interval([&](double s) { return F(x + s * v, v); }, 0.0, 1.0, 1e-13);
}

double hilbert_distance(const SupportBody& omega, const Vec& x, const Vec& y)
{
    const Vec v = y - x;
    if (v.squaredNorm() == 0.0)
        return 0.0;
    const auto [tp, tm] = t_plus_minus(omega, x, v);
    t_plus_minus(omega, y, v);
    // With y = x + v: a = x - tm v, b = x + tp v, so the distances along the
    // chord are |a-x| = tm, |a-y| = tm+1, |b-x| = tp, |b-y| = tp-1 (units of |v|).
    return 0.5 * std::log(((tm + 1.0) * tp) / (tm * (tp - 1.0)));
}

Mat metric_tensor(RiemannianKind kind, const Vec& x)
{
    const int d = static_cast<int>(x.size());
    const double r2 = x.squaredNorm();
    if (kind == RiemannianKind::Klein) {
        if (!(r2 < 1.0))
            throw DomainError("Klein metric is defined in the open unit ball");
        const double c = 1.0 - r2;
        return Mat::Identity(d, d) / c + x * x.transpose() / (c * c);
    }
    const double c = 1.0 + r2;
    return Mat::Identity(d, d) / c - x * x.transpose() / (c * c);
}

namespace {

double golden_max(const std::function<double(double)>& f, double a, double b, int iters, double* arg = nullptr)
{
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if (arg)
        *arg = fc >= fd ? c : d;
    return std::max(fc, fd);
}

int default_nodes(int k) { return k == 2 ? 256 : (k == 3 ? 10000 : 20000); }

/// Precomputed direction grids for one volume definition in dimension k.
class DensityEvaluator {
  public:
    DensityEvaluator(int k, const VolumeDefinition& def) : k_(k), def_(def)
    {
        if (k < 1)
            throw InputError("normed space dimension must be positive");
        if (k == 1)
            return;
        const int n = def.nodes > 0 ? def.nodes : default_nodes(k);
        rule_ = sphere_rule(k, n);
        if (k >= 3 && def.kind == VolumeKind::HolmesThompson) {
            coarse_ = sphere_rule(k, k == 3 ? 1500 : 4000).nodes;
            spacing_ = std::pow(sphere_area(k) / coarse_.size(), 1.0 / (k - 1));
        }
    }

    double operator()(const std::function<double(const Vec&)>& norm) const
    {
        if (k_ == 1) {
            const double fp = norm(Vec::Ones(1));
            const double fm = norm(-Vec::Ones(1));
            if (def_.kind == VolumeKind::Busemann)
                return 2.0 / (1.0 / fp + 1.0 / fm);
            return 0.5 * (fp + fm);
        }
        if (def_.kind == VolumeKind::Busemann) {
            KahanSum s;
            for (std::size_t i = 0; i < rule_.nodes.size(); ++i)
                s.add(rule_.weights[i] * std::pow(norm(rule_.nodes[i]), -k_));
            return 1.0 / s.value();
        }
        return k_ == 2 ? holmes_thompson_2d(norm) : holmes_thompson_nd(norm);
    }

  private:
    // Support function of the unit ball B = {F <= 1}: h_B(u) = max_w <u, w> / F(w).
    double holmes_thompson_2d(const std::function<double(const Vec&)>& norm) const
    {
        const int n = static_cast<int>(rule_.nodes.size());
        std::vector<double> inv(n);
        for (int j = 0; j < n; ++j)
            inv[j] = 1.0 / norm(rule_.nodes[j]);
        auto f = [&](int i, int j) { return rule_.nodes[i].dot(rule_.nodes[j]) * inv[j]; };
        int p = 0;
        for (int j = 1; j < n; ++j)
            if (f(0, j) > f(0, p))
                p = j;
        const double dt = 2.0 * std::numbers::pi / n;
        KahanSum s;
        for (int i = 0; i < n; ++i) {
            for (int steps = 0; steps < n; ++steps) {
                const int q = (p + 1) % n;
                if (f(i, q) >= f(i, p))
                    p = q;
                else
                    break;
            }
            const double theta = 2.0 * std::numbers::pi * (p + 0.5) / n;
            const Vec& u = rule_.nodes[i];
            const double h = golden_max(
                [&](double t) {
                    const Vec w = (Vec(2) << std::cos(t), std::sin(t)).finished();
                    return u.dot(w) / norm(w);
                },
                theta - dt, theta + dt, 30);
            s.add(rule_.weights[i] * std::pow(std::max(h, f(i, p)), -2.0));
        }
        return s.value();
    }

    double holmes_thompson_nd(const std::function<double(const Vec&)>& norm) const
    {
        std::vector<double> inv(coarse_.size());
        for (std::size_t j = 0; j < coarse_.size(); ++j)
            inv[j] = 1.0 / norm(coarse_[j]);
        KahanSum s;
        for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
            const Vec& u = rule_.nodes[i];
            std::size_t best = 0;
            double best_v = -INFINITY;
            for (std::size_t j = 0; j < coarse_.size(); ++j) {
                const double v = u.dot(coarse_[j]) * inv[j];
                if (v > best_v) {
                    best_v = v;
                    best = j;
                }
            }
            Vec w = coarse_[best];
            double delta = spacing_;
            for (int sweep = 0; sweep < 4; ++sweep) {
                const Mat E = tangent_frame(w);
                for (int c = 0; c < k_ - 1; ++c) {
                    const Vec e = E.col(c);
                    double t_best = 0.0;
                    const double v = golden_max(
                        [&](double t) {
                            const Vec ww = std::cos(t) * w + std::sin(t) * e;
                            return u.dot(ww) / norm(ww);
                        },
                        -delta, delta, 25, &t_best);
                    if (v > best_v) {
                        best_v = v;
                        w = (std::cos(t_best) * w + std::sin(t_best) * e).normalized();
                    }
                }
                delta *= 0.25;
            }
            s.add(rule_.weights[i] * std::pow(best_v, -static_cast<double>(k_)));
        }
        return s.value();
    }

    int k_;
    VolumeDefinition def_;
    SphereRule rule_;
    std::vector<Vec> coarse_;
    double spacing_ = 0.0;
};

/// Tensor-product degree-5 Lagrange interpolant of a function on a box.
class PhiCache {
  public:
    PhiCache(const Vec& lo, const Vec& hi, int cells, const std::function<double(const Vec&)>& f,
             const std::function<bool(const Vec&)>& valid)
        : d_(static_cast<int>(lo.size())), cells_(cells)
    {
        if (d_ > 6)
            throw InputError("phi cache supports d <= 6");
        h_ = (hi - lo) / cells;
        lo_ = lo;
        const int n = cells + 1;
        long total = 1;
        for (int k = 0; k < d_; ++k)
            total *= n;
        values_.resize(total);
        std::vector<int> idx(d_, 0);
        Vec x(d_);
        for (long c = 0; c < total; ++c) {
            long rem = c;
            for (int k = 0; k < d_; ++k) {
                idx[k] = static_cast<int>(rem % n);
                rem /= n;
                x(k) = lo_(k) + idx[k] * h_(k);
            }
            values_[c] = valid(x) ? f(x) : NAN;
        }
    }

    /// NaN when x is outside the box or the stencil touches an invalid node.
    double eval(const Vec& x) const
    {
        // Denominators prod_{l != m} (m - l) for nodes 0..5.
        static constexpr double denom[6] = {-120.0, 24.0, -12.0, 12.0, -24.0, 120.0};
        const int n = cells_ + 1;
        std::array<std::array<double, 6>, 6> w{};
        std::array<int, 6> start{};
        for (int k = 0; k < d_; ++k) {
            const double s = (x(k) - lo_(k)) / h_(k);
            if (!(s >= 0.0 && s <= cells_))
                return NAN;
            const int i0 = std::clamp(static_cast<int>(s) - 2, 0, cells_ - 5);
            start[k] = i0;
            const double t = s - i0;
            double prefix[7];
            double suffix[7];
            prefix[0] = 1.0;
            suffix[6] = 1.0;
            for (int l = 0; l < 6; ++l)
                prefix[l + 1] = prefix[l] * (t - l);
            for (int l = 5; l >= 0; --l)
                suffix[l] = suffix[l + 1] * (t - l);
            for (int m = 0; m < 6; ++m)
                w[k][m] = prefix[m] * suffix[m + 1] / denom[m];
        }
        if (d_ == 2) {
            double acc = 0.0;
            const double* base = values_.data() + start[0] + static_cast<long>(start[1]) * n;
            for (int j = 0; j < 6; ++j) {
                const double* row = base + static_cast<long>(j) * n;
                double r = 0.0;
                for (int i = 0; i < 6; ++i)
                    r += w[0][i] * row[i];
                acc += w[1][j] * r;
            }
            return acc;
        }
        int total = 1;
        for (int k = 0; k < d_; ++k)
            total *= 6;
        double acc = 0.0;
        for (int c = 0; c < total; ++c) {
            int rem = c;
            long lin = 0;
            long stride = 1;
            double wt = 1.0;
            for (int k = 0; k < d_; ++k) {
                const int m = rem % 6;
                rem /= 6;
                lin += (start[k] + m) * stride;
                stride *= n;
                wt *= w[k][m];
            }
            acc += wt * values_[lin];
        }
        return acc;
    }

  private:
    int d_;
    int cells_;
    Vec lo_;
    Vec h_;
    std::vector<double> values_;
};

void require_inside(const SupportBody& K, const SupportBody& omega)
{
    if (K.dim() != omega.dim())
        throw InputError("body and domain dimensions differ");
    for (const Vec& u : SupportBody::check_directions(K.dim(), K.dim() == 2 ? 720 : 2562)) {
        const Vec x = boundary_point_from_normal(K, u).x;
        const double r = x.norm();
        if (r > 0.0 && !(r < omega.radial(x / r) * (1.0 - 1e-9)))
            throw DomainError("body is not strictly inside the Finsler domain");
    }
}

} // namespace

double normed_space_density(const std::function<double(const Vec&)>& norm, int k, const VolumeDefinition& def)
{
    return DensityEvaluator(k, def)(norm);
}

double boundary_mass(const SupportBody& K, const std::function<double(const BoundaryPoint&)>& density, int nodes)
{
    const int d = K.dim();
    if (nodes <= 0)
        nodes = d == 2 ? 4096 : 20000;
    const double avg = sphere_average(
        d,
        [&](const Vec& u) {
            const BoundaryPoint p = boundary_point_from_normal(K, u);
            return density(p) * p.area_jacobian;
        },
        nodes, d == 3);
    return sphere_area(d) * avg;
}

GeometryWeights euclidean_weights(const SupportBody& K)
{
    GeometryWeights w;
    w.label = "euclidean";
    w.phi = [](const Vec&) { return 1.0; };
    w.sigma_density = [](const BoundaryPoint&) { return 1.0; };
    w.phi_constant = true;
    w.phi_value = 1.0;
    w.normalizer = boundary_mass(K, w.sigma_density);
    return w;
}

GeometryWeights riemannian_weights(RiemannianKind kind, const SupportBody& K)
{
    const int d = K.dim();
    GeometryWeights w;
    if (kind == RiemannianKind::Klein) {
        double hmax = 0.0;
        for (const Vec& u : SupportBody::check_directions(d, d == 2 ? 3600 : 20000))
            hmax = std::max(hmax, K.h(u));
        if (!(hmax < 1.0 - 1e-9))
            throw DomainError("Klein weights need the body inside the open unit ball");
        w.label = "klein";
        w.phi = [d](const Vec& x) {
            const double c = 1.0 - x.squaredNorm();
            if (!(c > 0.0))
                throw DomainError("Klein density evaluated outside the unit ball");
            return std::pow(c, -0.5 * (d + 1));
        };
        w.sigma_density = [d](const BoundaryPoint& p) {
            const double r2 = p.x.squaredNorm();
            const double xu = p.x.dot(p.normal);
            const double c = 1.0 - r2;
            return std::pow(c, -0.5 * (d - 1)) * std::sqrt(1.0 + (r2 - xu * xu) / c);
        };
    } else {
        w.label = "gnomonic";
        w.phi = [d](const Vec& x) { return std::pow(1.0 + x.squaredNorm(), -0.5 * (d + 1)); };
        w.sigma_density = [d](const BoundaryPoint& p) {
            const double r2 = p.x.squaredNorm();
            const double xu = p.x.dot(p.normal);
            const double c = 1.0 + r2;
            return std::pow(c, -0.5 * (d - 1)) * std::sqrt(1.0 - (r2 - xu * xu) / c);
        };
    }
    w.normalizer = boundary_mass(K, w.sigma_density);
    return w;
}

GeometryWeights finsler_weights(const FinslerNorm& F, const VolumeDefinition& voldef_d,
                                const VolumeDefinition& voldef_dminus1, const SupportBody& K,
                                const FinslerOptions& opts)
{
    const int d = K.dim();
    require_inside(K, F.omega());
    auto norm = std::make_shared<FinslerNorm>(F);
    auto dens_d = std::make_shared<DensityEvaluator>(d, voldef_d);
    auto dens_b = std::make_shared<DensityEvaluator>(d - 1, voldef_dminus1);

    auto direct = [norm, dens_d](const Vec& x) {
        return (*dens_d)([&](const Vec& w) { return (*norm)(x, w); });
    };

    GeometryWeights out;
    out.label = std::string(F.kind() == FinslerKind::Hilbert ? "hilbert" : "funk") + "/" +
                (voldef_d.kind == VolumeKind::Busemann ? "busemann" : "holmes_thompson");
    out.phi = direct;

    const int cells = opts.cache_cells > 0 ? opts.cache_cells : (d == 2 ? 128 : 0);
    if (opts.cache && cells >= 6) {
        auto [lo, hi] = K.bounding_box();
        const Vec pad = (hi - lo) * (3.0 / cells);
        lo -= pad;
        hi += pad;
        const SupportBody& omega = F.omega();
        auto valid = [&omega](const Vec& x) {
            const double r = x.norm();
            return r == 0.0 || r < omega.radial(x / r) * (1.0 - 1e-6);
        };
        int c = cells;
        std::shared_ptr<PhiCache> cache;
        double worst = 0.0;
        for (int attempt = 0; attempt < 3; ++attempt, c *= 2) {
            cache = std::make_shared<PhiCache>(lo, hi, c, direct, valid);
            SeedStream s(0xcac4eull, {static_cast<std::uint64_t>(c)});
            worst = 0.0;
            int checked = 0;
            while (checked < opts.check_points) {
                Vec x(d);
                for (int k = 0; k < d; ++k)
                    x(k) = s.uniform(lo(k) + pad(k), hi(k) - pad(k));
                if (!K.contains(x))
                    continue;
                const double a = cache->eval(x);
                const double b = direct(x);
                worst = std::isnan(a) ? INFINITY : std::max(worst, std::abs(a - b) / b);
                ++checked;
            }
            if (worst <= opts.cache_tol)
                break;
            cache.reset();
        }
        if (!cache)
            throw NumericalError("phi interpolation cache failed verification", worst, opts.cache_tol);
        out.phi = [cache, direct](const Vec& x) {
            const double v = cache->eval(x);
            return std::isnan(v) ? direct(x) : v;
        };
    }

    out.sigma_density = [norm, dens_b](const BoundaryPoint& p) {
        const Mat E = tangent_frame(p.normal);
        return (*dens_b)([&](const Vec& w) { return (*norm)(p.x, E * w); });
    };
    out.normalizer = boundary_mass(K, out.sigma_density);
    return out;
}

namespace {

VolumeKind parse_volume_kind(const std::string& s)
{
    if (s == "busemann")
        return VolumeKind::Busemann;
    if (s == "holmes_thompson")
        return VolumeKind::HolmesThompson;
    throw ConfigError("unknown volume_def '" + s + "'");
}

std::string volume_kind_name(VolumeKind k) { return k == VolumeKind::Busemann ? "busemann" : "holmes_thompson"; }

} // namespace

GeometrySpec GeometrySpec::from_json(const nlohmann::json& j)
{
    GeometrySpec g;
    g.geometry = j.value("geometry", g.geometry);
    static const std::vector<std::string> known{"euclidean", "klein", "gnomonic", "hilbert", "funk"};
    if (std::find(known.begin(), known.end(), g.geometry) == known.end())
        throw ConfigError("unknown geometry '" + g.geometry + "'");
    g.volume_def.kind = parse_volume_kind(j.value("volume_def", std::string("busemann")));
    g.volume_def_boundary.kind =
        parse_volume_kind(j.value("volume_def_boundary", volume_kind_name(g.volume_def.kind)));
    g.volume_def.nodes = g.volume_def_boundary.nodes = j.value("nodes", 0);
    if (j.contains("omega"))
        g.omega = j.at("omega");
    g.finsler.cache = j.value("cache", true);
    g.finsler.cache_cells = j.value("cache_cells", 0);
    if ((g.geometry == "hilbert" || g.geometry == "funk") && !g.omega)
        throw ConfigError("geometry '" + g.geometry + "' needs an omega body");
    return g;
}

nlohmann::json GeometrySpec::to_json() const
{
    nlohmann::json j{{"geometry", geometry},
                     {"volume_def", volume_kind_name(volume_def.kind)},
                     {"volume_def_boundary", volume_kind_name(volume_def_boundary.kind)},
                     {"nodes", volume_def.nodes},
                     {"cache", finsler.cache},
                     {"cache_cells", finsler.cache_cells}};
    if (omega)
        j["omega"] = *omega;
    return j;
}

GeometryWeights make_weights(const GeometrySpec& spec, const SupportBody& K)
{
    if (spec.geometry == "euclidean")
        return euclidean_weights(K);
    if (spec.geometry == "klein")
        return riemannian_weights(RiemannianKind::Klein, K);
    if (spec.geometry == "gnomonic")
        return riemannian_weights(RiemannianKind::Gnomonic, K);
    SupportBody omega = [&]() {
        try {
            return SupportBody::from_json(*spec.omega);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("bad omega spec: ") + e.what());
        }
    }();
    const FinslerKind kind = spec.geometry == "hilbert" ? FinslerKind::Hilbert : FinslerKind::Funk;
    return finsler_weights(FinslerNorm(std::move(omega), kind), spec.volume_def, spec.volume_def_boundary, K,
                           spec.finsler);
}

} // namespace geoclt
