#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace geoclt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Error taxonomy. The CLI maps ConfigError to exit code 2 and
// NumericalError / ExperimentAbort to exit code 3.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed argument (wrong dimension, non-unit direction, ...).
class InputError : public Error {
  public:
    using Error::Error;
};

/// Argument outside the mathematical domain of the operation.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// The geometric model violates an assumption (e.g. body not C2+).
class ModelError : public Error {
  public:
    using Error::Error;
};

/// Quadrature / iteration failed to converge.
class NumericalError : public Error {
  public:
    NumericalError(const std::string& what, double last = NAN, double previous = NAN)
        : Error(what), last_(last), previous_(previous) {}

    double last_estimate() const { return last_; }
    double previous_estimate() const { return previous_; }

  private:
    double last_;
    double previous_;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

class DataError : public Error {
  public:
    using Error::Error;
};

/// Too many failed replications; the experiment is aborted.
class ExperimentAbort : public Error {
  public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Global geometric tolerance (incidence and positivity checks).
// Set it before launching work; readers do not synchronize.
// ---------------------------------------------------------------------------

double tolerance();
void set_tolerance(double tol);

/// Volume of the d-dimensional Euclidean unit ball.
inline double kappa(int d)
{
    return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

/// Surface area of S^{d-1} (unnormalized), d * kappa_d.
inline double sphere_area(int d) { return d * kappa(d); }

/// C_d = 2 / kappa_d, the mean-width / dual-volume constant.
inline double width_constant(int d) { return 2.0 / kappa(d); }

/// Orthonormal basis of the orthogonal complement of unit vector u, as the
/// columns of a d x (d-1) matrix. Deterministic in u.
Mat tangent_frame(const Vec& u);

/// Orthonormal basis (columns) of the hyperplane orthogonal to n, for arbitrary nonzero n.
inline Mat complement_basis(const Vec& n) { return tangent_frame(n.normalized()); }

/// Unit vector e_i in R^d.
inline Vec unit(int d, int i)
{
    Vec e = Vec::Zero(d);
    e(i) = 1.0;
    return e;
}

/// Neumaier compensated summation.
class KahanSum {
  public:
    void add(double x)
    {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace geoclt
