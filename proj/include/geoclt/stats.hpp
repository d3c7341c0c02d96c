#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace geoclt {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile (inverse CDF), p in (0, 1).
double normal_quantile(double p);

struct MeanVar {
    double mean = 0.0;
    double variance = 0.0; ///< Unbiased (m - 1 denominator); 0 for m = 1.
};

/// Compensated two-pass mean and variance. Throws DataError on an empty sample.
MeanVar mean_variance(const std::vector<double>& sample);

/// (x - mean) / sd with the empirical moments, applied twice so the result
/// has mean 0 and variance 1 to rounding. A constant sample maps to zeros.
std::vector<double> standardize(const std::vector<double>& sample);

/// sup_x |F_m(x) - Phi(x)| for the empirical CDF F_m of the sample.
double kolmogorov_distance(std::vector<double> sample);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares y = intercept + slope * x.
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

/// log(variance) against log(n). Needs >= 4 distinct n spanning a factor 10
/// and positive variances (DataError otherwise).
LinearFit variance_scaling_fit(const std::vector<std::pair<double, double>>& rows);

struct RateFit {
    double exponent = 0.0;         ///< Slope of log d_Kol on log n.
    double intercept = 0.0;
    double r2 = 0.0;
    double exponent_adjusted = 0.0; ///< Slope of log n with log log n as a covariate.
    double loglog_coefficient = 0.0;
    double envelope_power = 0.0;   ///< 2(d+1)/(d-1) + 1.
    double envelope_constant = 0.0; ///< C with C n^{-1/2} (log n)^power = d_Kol at the smallest n.
    bool below_envelope = false;
};

/// Kolmogorov-distance rate curve; same preconditions as variance_scaling_fit.
RateFit rate_curve(const std::vector<std::pair<double, double>>& rows, int d);

} // namespace geoclt
