#pragma once

#include <string>
#include <vector>

namespace qb {

/// One labeled curve; x and y must have equal length.
struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Axis ranges, labels and title for a line plot.
struct SvgSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;
};

/// Minimal deterministic line-plot renderer: axes, ticks, legend, polylines.
/// No external plotting dependency; identical input yields identical bytes.
std::string render_line_svg(const SvgSpec& spec, const std::vector<SvgSeries>& series);

}  // namespace qb
