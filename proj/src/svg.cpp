#include "geoclt/svg.hpp"

#include "geoclt/core.hpp"
#include "geoclt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace geoclt::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

struct Scale {
    double lo = 0.0;
    double hi = 1.0;
    bool log = false;
    double pixel_lo = 0.0;
    double pixel_hi = 1.0;

    double map(double v) const
    {
        const double t = log ? std::log10(v) : v;
        return pixel_lo + (t - lo) / (hi - lo) * (pixel_hi - pixel_lo);
    }
};

Scale make_scale(std::vector<double> vals, bool log, double p0, double p1)
{
    Scale s;
    s.log = log;
    s.pixel_lo = p0;
    s.pixel_hi = p1;
    std::vector<double> t;
    for (double v : vals)
        if (std::isfinite(v) && (!log || v > 0.0))
            t.push_back(log ? std::log10(v) : v);
    if (t.empty()) {
        s.lo = 0.0;
        s.hi = 1.0;
        return s;
    }
    auto [mn, mx] = std::minmax_element(t.begin(), t.end());
    s.lo = *mn;
    s.hi = *mx;
    if (s.hi - s.lo < 1e-12 * std::max(1.0, std::abs(s.hi))) {
        s.lo -= 0.5;
        s.hi += 0.5;
    }
    const double pad = 0.05 * (s.hi - s.lo);
    s.lo -= pad;
    s.hi += pad;
    return s;
}

std::vector<double> ticks(const Scale& s)
{
    std::vector<double> out;
    if (s.log) {
        for (double e = std::ceil(s.lo); e <= s.hi; e += 1.0)
            out.push_back(std::pow(10.0, e));
        if (out.size() < 2)
            for (int k = 0; k <= 4; ++k)
                out.push_back(std::pow(10.0, s.lo + (s.hi - s.lo) * k / 4.0));
        return out;
    }
    const double raw = (s.hi - s.lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    for (double v = std::ceil(s.lo / step) * step; v <= s.hi + 1e-12 * step; v += step)
        out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return out;
}

} // namespace

std::string plot(const Axes& axes, const std::vector<Series>& series)
{
    std::vector<double> xs;
    std::vector<double> ys;
    for (const Series& s : series) {
        xs.insert(xs.end(), s.x.begin(), s.x.end());
        ys.insert(ys.end(), s.y.begin(), s.y.end());
    }
    const Scale sx = make_scale(xs, axes.log_x, kLeft, kWidth - kRight);
    const Scale sy = make_scale(ys, axes.log_y, kHeight - kBottom, kTop);

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(axes.title)
      << "</text>\n";
    o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight << "\" height=\""
      << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : ticks(sx)) {
        const double px = sx.map(t);
        o << "<line x1=\"" << num(px) << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << num(px) << "\" y2=\""
          << kHeight - kBottom + 5 << "\" stroke=\"black\"/>";
        o << "<text x=\"" << num(px) << "\" y=\"" << kHeight - kBottom + 18 << "\" text-anchor=\"middle\">"
          << tick_label(t) << "</text>\n";
    }
    for (double t : ticks(sy)) {
        const double py = sy.map(t);
        o << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(py) << "\" x2=\"" << kLeft << "\" y2=\"" << num(py)
          << "\" stroke=\"black\"/>";
        o << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(py + 4) << "\" text-anchor=\"end\">" << tick_label(t)
          << "</text>\n";
    }
    o << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\">" << escape(axes.xlabel) << "</text>\n";
    o << "<text x=\"16\" y=\"" << (kTop + kHeight - kBottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (kTop + kHeight - kBottom) / 2 << ")\">" << escape(axes.ylabel) << "</text>\n";

    double legend_y = kTop + 16;
    for (const Series& s : series) {
        if (s.points) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (axes.log_x && s.x[i] <= 0) ||
                    (axes.log_y && s.y[i] <= 0))
                    continue;
                o << "<circle cx=\"" << num(sx.map(s.x[i])) << "\" cy=\"" << num(sy.map(s.y[i]))
                  << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
            }
        } else {
            o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (axes.log_x && s.x[i] <= 0) ||
                    (axes.log_y && s.y[i] <= 0))
                    continue;
                o << num(sx.map(s.x[i])) << ',' << num(sy.map(s.y[i])) << ' ';
            }
            o << "\"/>\n";
        }
        if (!s.label.empty()) {
            o << "<rect x=\"" << kWidth - kRight - 170 << "\" y=\"" << legend_y - 9
              << "\" width=\"10\" height=\"10\" fill=\"" << s.color << "\"/>";
            o << "<text x=\"" << kWidth - kRight - 155 << "\" y=\"" << legend_y << "\">" << escape(s.label)
              << "</text>\n";
            legend_y += 16;
        }
    }
    o << "</svg>\n";
    return o.str();
}

std::string normal_histogram(const std::vector<double>& z, const std::string& title, int bins)
{
    if (z.empty())
        throw DataError("histogram of an empty sample");
    if (bins <= 0)
        bins = std::clamp(static_cast<int>(std::ceil(2.0 * std::cbrt(static_cast<double>(z.size())))), 8, 60);
    const double lo = std::min(-4.0, *std::min_element(z.begin(), z.end()));
    const double hi = std::max(4.0, *std::max_element(z.begin(), z.end()));
    const double width = (hi - lo) / bins;
    std::vector<double> counts(bins, 0.0);
    for (double v : z)
        counts[std::clamp(static_cast<int>((v - lo) / width), 0, bins - 1)] += 1.0;
    Series bars;
    bars.points = false;
    bars.label = "sample";
    bars.x.push_back(lo);
    bars.y.push_back(0.0);
    for (int b = 0; b < bins; ++b) {
        const double dens = counts[b] / (z.size() * width);
        bars.x.insert(bars.x.end(), {lo + b * width, lo + (b + 1) * width});
        bars.y.insert(bars.y.end(), {dens, dens});
    }
    bars.x.push_back(hi);
    bars.y.push_back(0.0);
    Series normal;
    normal.points = false;
    normal.color = "#d62728";
    normal.label = "N(0,1) density";
    for (int i = 0; i <= 200; ++i) {
        const double x = lo + (hi - lo) * i / 200.0;
        normal.x.push_back(x);
        normal.y.push_back(std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi));
    }
    return plot({title, "standardized value", "density"}, {bars, normal});
}

std::string normal_qq(const std::vector<double>& z, const std::string& title)
{
    if (z.empty())
        throw DataError("QQ plot of an empty sample");
    std::vector<double> s = z;
    std::sort(s.begin(), s.end());
    Series pts;
    const double m = static_cast<double>(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        pts.x.push_back(normal_quantile((i + 0.5) / m));
        pts.y.push_back(s[i]);
    }
    const double a = std::min(pts.x.front(), s.front());
    const double b = std::max(pts.x.back(), s.back());
    Series diag;
    diag.points = false;
    diag.color = "#d62728";
    diag.x = {a, b};
    diag.y = {a, b};
    return plot({title, "normal quantile", "sample quantile"}, {pts, diag});
}

} // namespace geoclt::svg
