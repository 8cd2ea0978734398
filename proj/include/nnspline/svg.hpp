#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nnspline/bezier.hpp"
#include "nnspline/dataset.hpp"

namespace nnspline {

/// Polyline samples of the spline, at least 200 points per interval
/// (requests below that are raised to 200).
std::vector<std::pair<double, double>> sample_spline(const SplineCoefficients& s,
                                                     int points_per_interval);

struct SvgCurve {
    std::string label;
    const SplineCoefficients* spline = nullptr;
};

struct SvgOptions {
    int width = 900;
    int height = 540;
    int samples_per_interval = 200;
    int zoom_interval = -1;  // when >= 0, adds a magnified panel of that interval
    std::string title;
};

/// Overlay plot of fitted splines and the data points; optionally a second
/// panel magnifying one interval.
void write_spline_svg(const std::string& path, const Dataset& data,
                      const std::vector<SvgCurve>& curves, const SvgOptions& options = {});

}  // namespace nnspline
