#include "geoclt/quadrature.hpp"

#include "geoclt/rng.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <string>

namespace geoclt {

GaussRule gauss_jacobi(int m, double alpha, double beta)
{
    if (m < 1)
        throw InputError("Gauss rule needs at least one node");
    if (!(alpha > -1.0) || !(beta > -1.0))
        throw InputError("Jacobi exponents must exceed -1");
    const double ab = alpha + beta;
    Mat J = Mat::Zero(m, m);
    for (int n = 0; n < m; ++n) {
        if (n == 0)
            J(0, 0) = (beta - alpha) / (ab + 2.0);
        else
            J(n, n) = (beta * beta - alpha * alpha) / ((2.0 * n + ab) * (2.0 * n + ab + 2.0));
        if (n >= 1) {
            const double s = 2.0 * n + ab;
            const double num = 4.0 * n * (n + alpha) * (n + beta);
            const double den = s * s * (s + 1.0);
            // (n + ab) / (s - 1) is exactly 1 at n = 1.
            const double ratio = n == 1 ? 1.0 : (n + ab) / (s - 1.0);
            const double b = std::sqrt(num * ratio / den);
            J(n, n - 1) = J(n - 1, n) = b;
        }
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(J);
    const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                                std::lgamma(ab + 2.0));
    GaussRule r;
    r.nodes = es.eigenvalues();
    r.weights.resize(m);
    for (int i = 0; i < m; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        r.weights(i) = mu0 * v0 * v0;
    }
    return r;
}

SimplexRule simplex_rule(int k, int degree)
{
    if (k < 1)
        throw InputError("simplex rule needs dimension >= 1");
    if (degree < 1)
        throw InputError("simplex degree must be positive");
    const int m = (degree + 2) / 2;
    // Direction i uses the weight (1 - t)^(k - 1 - i) on [0, 1].
    std::vector<Vec> t(k), w(k);
    for (int i = 0; i < k; ++i) {
        const double a = k - 1 - i;
        const GaussRule g = gauss_jacobi(m, a, 0.0);
        t[i] = (g.nodes.array() + 1.0) / 2.0;
        w[i] = g.weights / std::pow(2.0, a + 1.0);
    }
    long total = 1;
    for (int i = 0; i < k; ++i)
        total *= m;
    SimplexRule r;
    r.dim = k;
    r.degree = 2 * m - 1;
    r.bary.resize(k + 1, total);
    r.weights.resize(total);
    double kfact = 1.0;
    for (int i = 2; i <= k; ++i)
        kfact *= i;
    std::vector<int> idx(k, 0);
    for (long c = 0; c < total; ++c) {
        long rem = c;
        for (int i = 0; i < k; ++i) {
            idx[i] = static_cast<int>(rem % m);
            rem /= m;
        }
        double rest = 1.0;
        double weight = kfact;
        for (int i = 0; i < k; ++i) {
            const double ti = t[i](idx[i]);
            r.bary(i + 1, c) = rest * ti;
            rest *= 1.0 - ti;
            weight *= w[i](idx[i]);
        }
        r.bary(0, c) = rest;
        r.weights(c) = weight;
    }
    return r;
}

std::vector<SimplexCols> refine_simplex(const SimplexCols& s)
{
    const int k = static_cast<int>(s.cols()) - 1;
    std::vector<SimplexCols> cur{s};
    for (int round = 0; round < k; ++round) {
        std::vector<SimplexCols> next;
        next.reserve(2 * cur.size());
        for (const SimplexCols& c : cur) {
            int ea = 0, eb = 1;
            double best = -1.0;
            for (int a = 0; a <= k; ++a)
                for (int b = a + 1; b <= k; ++b) {
                    const double len = (c.col(a) - c.col(b)).squaredNorm();
                    if (len > best) {
                        best = len;
                        ea = a;
                        eb = b;
                    }
                }
            const Vec mid = 0.5 * (c.col(ea) + c.col(eb));
            SimplexCols c1 = c, c2 = c;
            c1.col(ea) = mid;
            c2.col(eb) = mid;
            next.push_back(std::move(c1));
            next.push_back(std::move(c2));
        }
        cur.swap(next);
    }
    return cur;
}

double simplex_measure(const SimplexCols& s)
{
    const int k = static_cast<int>(s.cols()) - 1;
    if (k <= 0)
        return 0.0;
    Mat E(s.rows(), k);
    for (int i = 1; i <= k; ++i)
        E.col(i - 1) = s.col(i) - s.col(0);
    double g;
    if (E.rows() == k)
        g = std::abs(E.determinant());
    else
        g = std::sqrt(std::max(0.0, (E.transpose() * E).determinant()));
    for (int i = 2; i <= k; ++i)
        g /= i;
    return g;
}

namespace {

double apply_rule(const std::vector<SimplexCols>& simplices, const SimplexRule& rule, const PointFunction& f)
{
    KahanSum total;
    if (simplices.empty())
        return 0.0;
    const Eigen::Index d = simplices.front().rows();
    Vec x(d);
    Mat X(d, rule.bary.cols());
    for (const SimplexCols& s : simplices) {
        X.noalias() = s * rule.bary;
        double acc = 0.0;
        for (Eigen::Index i = 0; i < X.cols(); ++i) {
            x = X.col(i);
            acc += rule.weights(i) * f(x);
        }
        total.add(simplex_measure(s) * acc);
    }
    return total.value();
}

} // namespace

RefinedIntegral integrate_simplices(const std::vector<SimplexCols>& simplices, const PointFunction& f, int degree,
                                    int max_refine, double rel_tol)
{
    if (simplices.empty())
        return {};
    const int k = static_cast<int>(simplices.front().cols()) - 1;
    const SimplexRule rule = simplex_rule(k, degree);
    RefinedIntegral r;
    r.value = apply_rule(simplices, rule, f);
    r.previous = NAN;
    std::vector<SimplexCols> cur = simplices;
    for (int level = 1; level <= max_refine; ++level) {
        std::vector<SimplexCols> next;
        next.reserve(cur.size() << k);
        for (const SimplexCols& s : cur)
            for (SimplexCols& c : refine_simplex(s))
                next.push_back(std::move(c));
        cur.swap(next);
        r.previous = r.value;
        r.value = apply_rule(cur, rule, f);
        r.level = level;
        if (std::abs(r.value - r.previous) <= rel_tol * std::abs(r.value))
            return r;
    }
    throw NumericalError("simplex quadrature did not converge after " + std::to_string(max_refine) +
                             " refinement levels",
                         r.value, r.previous);
}

namespace {

Mat random_rotation(int d, std::uint64_t seed)
{
    SeedStream s(seed, {0x726f74ull});
    Mat G(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            G(i, j) = s.normal();
    Eigen::HouseholderQR<Mat> qr(G);
    Mat Q = qr.householderQ();
    const Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j)
        if (R(j, j) < 0.0)
            Q.col(j) = -Q.col(j);
    return Q;
}

} // namespace

SphereRule sphere_rule(int d, int nodes, std::uint64_t rotation_seed)
{
    if (d < 2)
        throw InputError("sphere rule needs d >= 2");
    if (nodes < 1)
        throw InputError("sphere rule needs at least one node");
    SphereRule r;
    if (d == 2) {
        r.nodes.reserve(nodes);
        for (int i = 0; i < nodes; ++i) {
            const double a = 2.0 * std::numbers::pi * (i + 0.5) / nodes;
            r.nodes.push_back((Vec(2) << std::cos(a), std::sin(a)).finished());
        }
        r.weights.assign(nodes, 1.0 / nodes);
    } else if (d == 3) {
        const int nz = std::max(1, static_cast<int>(std::lround(std::sqrt(nodes / 2.0))));
        const int na = 2 * nz;
        r.nodes.reserve(static_cast<std::size_t>(nz) * na);
        for (int i = 0; i < nz; ++i) {
            const double z = -1.0 + (i + 0.5) * 2.0 / nz;
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            for (int j = 0; j < na; ++j) {
                const double a = 2.0 * std::numbers::pi * (j + 0.5) / na;
                r.nodes.push_back((Vec(3) << rho * std::cos(a), rho * std::sin(a), z).finished());
            }
        }
        r.weights.assign(r.nodes.size(), 1.0 / static_cast<double>(r.nodes.size()));
    } else {
        SeedStream s(rotation_seed ? rotation_seed : 0x9e3779b97f4a7c15ull, {static_cast<std::uint64_t>(d)});
        r.nodes.reserve(nodes);
        for (int i = 0; i < nodes; ++i) {
            Vec v(d);
            for (int k = 0; k < d; ++k)
                v(k) = s.normal();
            r.nodes.push_back(v.normalized());
        }
        r.weights.assign(nodes, 1.0 / nodes);
        return r;
    }
    if (rotation_seed != 0) {
        const Mat Q = random_rotation(d, rotation_seed);
        for (Vec& v : r.nodes)
            v = Q * v;
    }
    return r;
}

double sphere_average(int d, const std::function<double(const Vec&)>& f, int nodes, bool richardson,
                      std::uint64_t rotation_seed)
{
    auto run = [&](int count) {
        const SphereRule r = sphere_rule(d, count, rotation_seed);
        KahanSum s;
        for (std::size_t i = 0; i < r.nodes.size(); ++i)
            s.add(r.weights[i] * f(r.nodes[i]));
        return s.value();
    };
    if (richardson && d == 3) {
        const double coarse = run(nodes);
        const double fine = run(4 * nodes);
        return (4.0 * fine - coarse) / 3.0;
    }
    return run(nodes);
}

double integrate_interval(const std::function<double(double)>& f, double a, double b, double rel_tol)
{
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, rel_tol, &err);
    if (!(std::abs(err) <= std::max(1e3 * rel_tol * std::abs(v), 1e-14)))
        throw NumericalError("adaptive interval quadrature did not converge", v, NAN);
    return v;
}

} // namespace geoclt
