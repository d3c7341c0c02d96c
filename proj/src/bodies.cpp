#include "geoclt/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace geoclt {

namespace {

constexpr double kUnitTol = 1e-10;

// Cubic harmonic p(y) = y1^3 - 3 y1 y2^2 and its derivatives.
double cubic(const Vec& y) { return y(0) * y(0) * y(0) - 3.0 * y(0) * y(1) * y(1); }

Vec cubic_grad(const Vec& y)
{
    Vec g = Vec::Zero(y.size());
    g(0) = 3.0 * y(0) * y(0) - 3.0 * y(1) * y(1);
    g(1) = -6.0 * y(0) * y(1);
    return g;
}

Mat cubic_hess(const Vec& y)
{
    Mat H = Mat::Zero(y.size(), y.size());
    H(0, 0) = 6.0 * y(0);
    H(0, 1) = H(1, 0) = -6.0 * y(1);
    H(1, 1) = -6.0 * y(0);
    return H;
}

std::string default_label(BodyKind kind)
{
    switch (kind) {
    case BodyKind::Ball:
        return "ball";
    case BodyKind::Ellipsoid:
        return "ellipsoid";
    case BodyKind::PerturbedBall:
        return "perturbed_ball";
    }
    return "body";
}

} // namespace

std::vector<Vec> SupportBody::check_directions(int dim, int count)
{
    std::vector<Vec> dirs;
    dirs.reserve(count);
    if (dim == 2) {
        for (int i = 0; i < count; ++i) {
            const double a = 2.0 * std::numbers::pi * (i + 0.5) / count;
            Vec u(2);
            u << std::cos(a), std::sin(a);
            dirs.push_back(u);
        }
    } else if (dim == 3) {
        // Fibonacci lattice.
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < count; ++i) {
            const double z = 1.0 - 2.0 * (i + 0.5) / count;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            Vec u(3);
            u << r * std::cos(golden * i), r * std::sin(golden * i), z;
            dirs.push_back(u);
        }
    } else {
        // Deterministic pseudo-random directions.
        std::uint64_t state = 0x5eed;
        auto next = [&state]() {
            state = state * 6364136223846793005ull + 1442695040888963407ull;
            return (static_cast<double>(state >> 11) + 0.5) * 0x1.0p-53;
        };
        for (int i = 0; i < count; ++i) {
            Vec u(dim);
            for (int k = 0; k < dim; ++k)
                u(k) = std::sqrt(-2.0 * std::log(next())) * std::cos(2.0 * std::numbers::pi * next());
            dirs.push_back(u.normalized());
        }
        for (int k = 0; k < dim; ++k) {
            dirs.push_back(unit(dim, k));
            dirs.push_back(-unit(dim, k));
        }
    }
    return dirs;
}

SupportBody SupportBody::ball(int dim, double radius, std::optional<Vec> center)
{
    if (dim < 2)
        throw InputError("body dimension must be at least 2");
    if (!(radius > 0.0))
        throw InputError("ball radius must be positive");
    SupportBody b;
    b.dim_ = dim;
    b.kind_ = BodyKind::Ball;
    b.radius_ = radius;
    b.center_ = center ? *center : Vec::Zero(dim);
    if (b.center_.size() != dim)
        throw InputError("ball center has wrong dimension");
    if (b.center_.norm() >= radius)
        throw DomainError("ball must contain the origin in its interior");
    b.label_ = default_label(b.kind_);
    return b;
}

SupportBody SupportBody::ellipsoid(const Vec& semi_axes)
{
    if (semi_axes.size() < 2)
        throw InputError("body dimension must be at least 2");
    if ((semi_axes.array() <= 0.0).any())
        throw InputError("ellipsoid semi-axes must be positive");
    SupportBody b;
    b.dim_ = static_cast<int>(semi_axes.size());
    b.kind_ = BodyKind::Ellipsoid;
    b.axes_ = semi_axes;
    b.center_ = Vec::Zero(b.dim_);
    b.label_ = default_label(b.kind_);
    return b;
}

SupportBody SupportBody::perturbed_ball(int dim, double radius, double epsilon)
{
    if (dim < 2)
        throw InputError("body dimension must be at least 2");
    if (!(radius > 0.0))
        throw InputError("radius must be positive");
    SupportBody b;
    b.dim_ = dim;
    b.kind_ = BodyKind::PerturbedBall;
    b.radius_ = radius;
    b.epsilon_ = epsilon;
    b.center_ = Vec::Zero(dim);
    b.label_ = default_label(b.kind_);
    b.validate();
    return b;
}

void SupportBody::validate() const
{
    const int count = dim_ == 2 ? 720 : 2000;
    for (const Vec& u : check_directions(dim_, count)) {
        if (!(h(u) > 0.0))
            throw ModelError("support function not positive: origin is not interior");
        Eigen::LLT<Mat> llt(curvature_matrix(u));
        if (llt.info() != Eigen::Success)
            throw ModelError("body not C2+ (curvature matrix not positive definite on the check grid)");
    }
}

SupportBody SupportBody::from_json(const nlohmann::json& spec)
{
    const std::string kind = spec.at("kind").get<std::string>();
    SupportBody body = [&]() {
        if (kind == "ball") {
            const int dim = spec.at("dim").get<int>();
            std::optional<Vec> center;
            if (spec.contains("center")) {
                auto c = spec.at("center").get<std::vector<double>>();
                center = Eigen::Map<Vec>(c.data(), static_cast<Eigen::Index>(c.size()));
            }
            return ball(dim, spec.value("radius", 1.0), center);
        }
        if (kind == "ellipsoid") {
            auto a = spec.at("semi_axes").get<std::vector<double>>();
            return ellipsoid(Eigen::Map<Vec>(a.data(), static_cast<Eigen::Index>(a.size())));
        }
        if (kind == "perturbed_ball")
            return perturbed_ball(spec.at("dim").get<int>(), spec.value("radius", 1.0),
                                  spec.value("epsilon", 0.05));
        throw InputError("unknown body kind '" + kind + "'");
    }();
    if (spec.contains("label"))
        body.label_ = spec.at("label").get<std::string>();
    return body;
}

nlohmann::json SupportBody::to_json() const
{
    nlohmann::json j;
    switch (kind_) {
    case BodyKind::Ball:
        j["kind"] = "ball";
        j["dim"] = dim_;
        j["radius"] = radius_;
        if (center_.norm() > 0.0)
            j["center"] = std::vector<double>(center_.data(), center_.data() + dim_);
        break;
    case BodyKind::Ellipsoid:
        j["kind"] = "ellipsoid";
        j["semi_axes"] = std::vector<double>(axes_.data(), axes_.data() + dim_);
        break;
    case BodyKind::PerturbedBall:
        j["kind"] = "perturbed_ball";
        j["dim"] = dim_;
        j["radius"] = radius_;
        j["epsilon"] = epsilon_;
        break;
    }
    j["label"] = label_;
    return j;
}

double SupportBody::h(const Vec& y) const
{
    switch (kind_) {
    case BodyKind::Ball:
        return radius_ * y.norm() + center_.dot(y);
    case BodyKind::Ellipsoid:
        return (axes_.array() * y.array()).matrix().norm();
    case BodyKind::PerturbedBall: {
        const double r2 = y.squaredNorm();
        return radius_ * (std::sqrt(r2) + epsilon_ * cubic(y) / r2);
    }
    }
    return 0.0;
}

Vec SupportBody::grad_h(const Vec& y) const
{
    switch (kind_) {
    case BodyKind::Ball:
        return radius_ * y / y.norm() + center_;
    case BodyKind::Ellipsoid: {
        const Vec a2y = (axes_.array().square() * y.array()).matrix();
        return a2y / h(y);
    }
    case BodyKind::PerturbedBall: {
        const double r2 = y.squaredNorm();
        const double r = std::sqrt(r2);
        const Vec gq = cubic_grad(y) / r2 - 2.0 * cubic(y) * y / (r2 * r2);
        return radius_ * (y / r + epsilon_ * gq);
    }
    }
    return Vec();
}

Mat SupportBody::hess_h(const Vec& y) const
{
    const int d = dim_;
    const Mat I = Mat::Identity(d, d);
    switch (kind_) {
    case BodyKind::Ball: {
        const double r = y.norm();
        return radius_ * (I - y * y.transpose() / (r * r)) / r;
    }
    case BodyKind::Ellipsoid: {
        const double hv = h(y);
        const Vec a2 = axes_.array().square();
        const Vec a2y = (a2.array() * y.array()).matrix();
        Mat A2 = a2.asDiagonal();
        return (A2 - a2y * a2y.transpose() / (hv * hv)) / hv;
    }
    case BodyKind::PerturbedBall: {
        const double r2 = y.squaredNorm();
        const double r = std::sqrt(r2);
        const double p = cubic(y);
        const Vec gp = cubic_grad(y);
        const Mat Hq = cubic_hess(y) / r2 - 2.0 * (gp * y.transpose() + y * gp.transpose()) / (r2 * r2) -
                       2.0 * p * I / (r2 * r2) + 8.0 * p * y * y.transpose() / (r2 * r2 * r2);
        const Mat Hn = (I - y * y.transpose() / r2) / r;
        return radius_ * (Hn + epsilon_ * Hq);
    }
    }
    return Mat();
}

Mat SupportBody::curvature_matrix(const Vec& u) const
{
    const Mat E = tangent_frame(u);
    return E.transpose() * hess_h(u) * E;
}

Mat SupportBody::spherical_hessian(const Vec& u) const
{
    return curvature_matrix(u) - h(u) * Mat::Identity(dim_ - 1, dim_ - 1);
}

double SupportBody::radial(const Vec& w) const
{
    switch (kind_) {
    case BodyKind::Ball: {
        // |r w - c| = R with r > 0.
        const double b = w.dot(center_);
        const double c = center_.squaredNorm() - radius_ * radius_;
        return b + std::sqrt(b * b - c);
    }
    case BodyKind::Ellipsoid:
        return 1.0 / (w.array() / axes_.array()).matrix().norm();
    case BodyKind::PerturbedBall:
        break;
    }
    // Newton on the normal: find unit u with grad_h(u) parallel to w.
    const Mat E = tangent_frame(w);
    Eigen::VectorXd a = Eigen::VectorXd::Zero(dim_ - 1);
    for (int it = 0; it < 100; ++it) {
        const Vec y = w + E * a;
        const double ny = y.norm();
        const Vec u = y / ny;
        const Vec x = grad_h(u);
        const Vec r = E.transpose() * x;
        if (r.norm() <= 1e-15 * x.norm())
            return x.dot(w);
        const Mat J = E.transpose() * hess_h(u) * E / ny;
        const Vec step = J.ldlt().solve(r);
        a -= step;
        if (step.norm() < 1e-16)
            return grad_h((w + E * a).normalized()).dot(w);
    }
    throw NumericalError("radial function: Newton iteration did not converge");
}

bool SupportBody::contains(const Vec& x, double slack) const
{
    const double r = x.norm();
    if (r == 0.0)
        return true;
    return r <= radial(x / r) * (1.0 + slack);
}

std::optional<std::pair<double, double>> SupportBody::ray_exits(const Vec& x, const Vec& v) const
{
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    switch (kind_) {
    case BodyKind::Ball: {
        const Vec xc = x - center_;
        a = v.squaredNorm();
        b = xc.dot(v);
        c = xc.squaredNorm() - radius_ * radius_;
        break;
    }
    case BodyKind::Ellipsoid: {
        const Eigen::ArrayXd inv2 = axes_.array().square().inverse();
        a = (v.array().square() * inv2).sum();
        b = (x.array() * v.array() * inv2).sum();
        c = (x.array().square() * inv2).sum() - 1.0;
        break;
    }
    case BodyKind::PerturbedBall:
        return std::nullopt;
    }
    // a t^2 + 2 b t + c = 0 with c < 0 (x interior): one positive, one negative root.
    const double disc = std::sqrt(b * b - a * c);
    // Stable root formulas.
    const double q = b >= 0 ? -(b + disc) : -(b - disc);
    const double r1 = q / a;
    const double r2 = c / q;
    const double tp = std::max(r1, r2);
    const double tm = -std::min(r1, r2);
    return std::make_pair(tp, tm);
}

double SupportBody::inradius() const
{
    switch (kind_) {
    case BodyKind::Ball:
        return radius_ - center_.norm();
    case BodyKind::Ellipsoid:
        return axes_.minCoeff();
    case BodyKind::PerturbedBall:
        break;
    }
    double best = INFINITY;
    for (const Vec& u : check_directions(dim_, dim_ == 2 ? 3600 : 20000))
        best = std::min(best, h(u));
    return best;
}

std::pair<Vec, Vec> SupportBody::bounding_box() const
{
    Vec lo(dim_), hi(dim_);
    for (int k = 0; k < dim_; ++k) {
        hi(k) = h(unit(dim_, k));
        lo(k) = -h(-unit(dim_, k));
    }
    return {lo, hi};
}

BoundaryPoint boundary_point_from_normal(const SupportBody& body, const Vec& u)
{
    if (u.size() != body.dim())
        throw InputError("direction has wrong dimension");
    if (std::abs(u.norm() - 1.0) > kUnitTol)
        throw InputError("direction must have unit Euclidean norm");
    const Mat A = body.curvature_matrix(u);
    Eigen::LLT<Mat> llt(A);
    if (llt.info() != Eigen::Success)
        throw ModelError("body not C2+ at u");
    BoundaryPoint p;
    p.x = body.grad_h(u);
    p.normal = u;
    // det from the Cholesky factor: product of squared diagonal entries.
    const auto L = llt.matrixL();
    double det = 1.0;
    for (int i = 0; i < A.rows(); ++i)
        det *= L(i, i) * L(i, i);
    p.area_jacobian = det;
    p.curvature = 1.0 / det;
    return p;
}

Vec legendre_transform(const SupportBody& body, const BoundaryPoint& p)
{
    const double hu = body.h(p.normal);
    if (!(hu > 0.0))
        throw DomainError("Legendre transform needs h(u) > 0 (origin interior)");
    return p.normal / hu;
}

} // namespace geoclt
