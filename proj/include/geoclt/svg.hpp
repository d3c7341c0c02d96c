#pragma once

#include <optional>
#include <string>
#include <vector>

namespace geoclt::svg {

struct Series {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool points = true; ///< Circles; otherwise a polyline.
    std::string label;
};

struct Axes {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool log_x = false;
    bool log_y = false;
};

/// Line/scatter plot of several series on shared axes (log axes use base 10 ticks).
std::string plot(const Axes& axes, const std::vector<Series>& series);

/// Density histogram of a standardized sample with the N(0,1) density overlaid.
std::string normal_histogram(const std::vector<double>& z, const std::string& title, int bins = 0);

/// Normal QQ plot: sorted sample against quantiles at (i - 0.5)/m, with the diagonal.
std::string normal_qq(const std::vector<double>& z, const std::string& title);

} // namespace geoclt::svg
