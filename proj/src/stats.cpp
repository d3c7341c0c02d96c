#include "geoclt/stats.hpp"

#include "geoclt/core.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace geoclt {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw InputError("normal_quantile needs p in (0, 1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

MeanVar mean_variance(const std::vector<double>& sample)
{
    if (sample.empty())
        throw DataError("empty sample");
    KahanSum s;
    for (double v : sample)
        s.add(v);
    const double m = static_cast<double>(sample.size());
    MeanVar out;
    out.mean = s.value() / m;
    if (sample.size() < 2)
        return out;
    KahanSum sq;
    KahanSum lin;
    for (double v : sample) {
        const double dv = v - out.mean;
        sq.add(dv * dv);
        lin.add(dv);
    }
    // Corrected two-pass formula.
    out.variance = (sq.value() - lin.value() * lin.value() / m) / (m - 1.0);
    return out;
}

std::vector<double> standardize(const std::vector<double>& sample)
{
    std::vector<double> z = sample;
    for (int pass = 0; pass < 2; ++pass) {
        const MeanVar mv = mean_variance(z);
        const double sd = std::sqrt(mv.variance);
        if (!(sd > 0.0)) {
            std::fill(z.begin(), z.end(), 0.0);
            return z;
        }
        for (double& v : z)
            v = (v - mv.mean) / sd;
    }
    return z;
}

double kolmogorov_distance(std::vector<double> sample)
{
    if (sample.empty())
        throw DataError("empty sample");
    std::sort(sample.begin(), sample.end());
    const double m = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double F = normal_cdf(sample[i]);
        d = std::max({d, (i + 1) / m - F, F - i / m});
    }
    return d;
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw DataError("least squares needs at least two paired values");
    const MeanVar mx = mean_variance(x);
    const MeanVar my = mean_variance(y);
    KahanSum sxy;
    KahanSum sxx;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy.add((x[i] - mx.mean) * (y[i] - my.mean));
        sxx.add((x[i] - mx.mean) * (x[i] - mx.mean));
    }
    if (!(sxx.value() > 0.0))
        throw DataError("least squares: x values are all equal");
    LinearFit f;
    f.slope = sxy.value() / sxx.value();
    f.intercept = my.mean - f.slope * mx.mean;
    KahanSum res;
    KahanSum tot;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        res.add(r * r);
        tot.add((y[i] - my.mean) * (y[i] - my.mean));
    }
    f.r2 = tot.value() > 0.0 ? 1.0 - res.value() / tot.value() : 1.0;
    return f;
}

namespace {

void check_rows(const std::vector<std::pair<double, double>>& rows, const char* what)
{
    std::set<double> ns;
    for (const auto& [n, v] : rows) {
        if (!(n > 0.0))
            throw DataError(std::string(what) + ": sample sizes must be positive");
        if (!(v > 0.0) || !std::isfinite(v))
            throw DataError(std::string(what) + ": nonpositive or non-finite entry at n = " +
                            std::to_string(static_cast<long>(n)));
        ns.insert(n);
    }
    if (ns.size() < 4)
        throw DataError(std::string(what) + ": need at least 4 distinct n");
    if (*ns.rbegin() < 10.0 * *ns.begin())
        throw DataError(std::string(what) + ": n values must span at least one decade");
}

} // namespace

LinearFit variance_scaling_fit(const std::vector<std::pair<double, double>>& rows)
{
    check_rows(rows, "variance fit");
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& [n, v] : rows) {
        x.push_back(std::log(n));
        y.push_back(std::log(v));
    }
    return least_squares(x, y);
}

RateFit rate_curve(const std::vector<std::pair<double, double>>& rows, int d)
{
    if (d < 2)
        throw InputError("rate curve needs d >= 2");
    check_rows(rows, "rate curve");
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& [n, v] : rows) {
        x.push_back(std::log(n));
        y.push_back(std::log(v));
    }
    const LinearFit plain = least_squares(x, y);
    RateFit r;
    r.exponent = plain.slope;
    r.intercept = plain.intercept;
    r.r2 = plain.r2;

    // log d = a + b log n + c log log n; needs n > e for the covariate.
    bool loglog_ok = true;
    for (const auto& row : rows)
        loglog_ok = loglog_ok && row.first > std::numbers::e;
    if (loglog_ok) {
        Mat A(static_cast<Eigen::Index>(rows.size()), 3);
        Vec b(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            A(i, 0) = 1.0;
            A(i, 1) = x[i];
            A(i, 2) = std::log(x[i]);
            b(i) = y[i];
        }
        const Vec coef = A.colPivHouseholderQr().solve(b);
        r.exponent_adjusted = coef(1);
        r.loglog_coefficient = coef(2);
    } else {
        r.exponent_adjusted = NAN;
        r.loglog_coefficient = NAN;
    }

    r.envelope_power = 2.0 * (d + 1.0) / (d - 1.0) + 1.0;
    auto smallest = std::min_element(rows.begin(), rows.end());
    auto shape = [&](double n) { return std::pow(n, -0.5) * std::pow(std::log(n), r.envelope_power); };
    r.envelope_constant = smallest->second / shape(smallest->first);
    r.below_envelope = true;
    for (const auto& [n, v] : rows)
        r.below_envelope = r.below_envelope && v <= r.envelope_constant * shape(n) * (1.0 + 1e-12);
    return r;
}

} // namespace geoclt
