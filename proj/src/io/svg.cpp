#include "qbattery/io/svg.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

namespace qb {

namespace {

constexpr double kWidth = 840.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 190.0;  // room for the legend
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;
constexpr int kTicks = 6;
constexpr std::size_t kMaxPointsPerCurve = 1500;

const std::array<const char*, 8> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
};

// fixed two-decimal formatting keeps the output byte-stable
std::string fmt(double v) {
    if (std::abs(v) < 5e-3) {
        v = 0.0;  // avoid "-0.00"
    }
    char buf[32];
    const int len = std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf, static_cast<std::size_t>(len));
}

std::string fmt_tick(double v) {
    if (std::abs(v) < 1e-12) {
        v = 0.0;
    }
    char buf[32];
    const int len = std::snprintf(buf, sizeof(buf), "%g", v);
    return std::string(buf, static_cast<std::size_t>(len));
}

std::string escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_line_svg(const SvgSpec& spec, const std::vector<SvgSeries>& series) {
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const double x_span = (spec.x_max > spec.x_min) ? spec.x_max - spec.x_min : 1.0;
    const double y_span = (spec.y_max > spec.y_min) ? spec.y_max - spec.y_min : 1.0;

    auto px = [&](double x) { return kLeft + (x - spec.x_min) / x_span * plot_w; };
    auto py = [&](double y) { return kTop + (spec.y_max - y) / y_span * plot_h; };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_tick(kWidth) +
           "\" height=\"" + fmt_tick(kHeight) + "\" viewBox=\"0 0 " + fmt_tick(kWidth) + " " +
           fmt_tick(kHeight) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt(kLeft + plot_w / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" + escape(spec.title) + "</text>\n";

    // frame
    svg += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(plot_w) +
           "\" height=\"" + fmt(plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";

    // ticks and grid
    for (int i = 0; i <= kTicks; ++i) {
        const double fx = spec.x_min + x_span * i / kTicks;
        const double gx = px(fx);
        svg += "<line x1=\"" + fmt(gx) + "\" y1=\"" + fmt(kTop + plot_h) + "\" x2=\"" + fmt(gx) +
               "\" y2=\"" + fmt(kTop + plot_h + 6) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(gx) + "\" y=\"" + fmt(kTop + plot_h + 22) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
               fmt_tick(fx) + "</text>\n";

        const double fy = spec.y_min + y_span * i / kTicks;
        const double gy = py(fy);
        svg += "<line x1=\"" + fmt(kLeft - 6) + "\" y1=\"" + fmt(gy) + "\" x2=\"" + fmt(kLeft) +
               "\" y2=\"" + fmt(gy) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(kLeft - 10) + "\" y=\"" + fmt(gy + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
               fmt_tick(fy) + "</text>\n";
        if (i > 0 && i < kTicks) {
            svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(gy) + "\" x2=\"" +
                   fmt(kLeft + plot_w) + "\" y2=\"" + fmt(gy) +
                   "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
        }
    }

    // axis labels
    svg += "<text x=\"" + fmt(kLeft + plot_w / 2) + "\" y=\"" + fmt(kHeight - 14) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
           escape(spec.x_label) + "</text>\n";
    svg += "<text x=\"18\" y=\"" + fmt(kTop + plot_h / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
           "transform=\"rotate(-90 18 " + fmt(kTop + plot_h / 2) + ")\">" +
           escape(spec.y_label) + "</text>\n";

    // curves; NaN samples break the polyline (used for undefined values)
    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& sr = series[s];
        const char* color = kPalette[s % kPalette.size()];
        const std::size_t n = std::min(sr.x.size(), sr.y.size());
        const std::size_t stride = std::max<std::size_t>(1, (n + kMaxPointsPerCurve - 1) /
                                                                kMaxPointsPerCurve);
        std::string points;
        auto flush_segment = [&] {
            if (!points.empty()) {
                svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                       "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
                points.clear();
            }
        };
        auto push_point = [&](std::size_t i) {
            if (std::isnan(sr.y[i])) {
                flush_segment();
                return;
            }
            points += fmt(px(sr.x[i])) + "," + fmt(py(std::clamp(sr.y[i], spec.y_min, spec.y_max)));
            points += ' ';
        };
        for (std::size_t i = 0; i < n; i += stride) {
            push_point(i);
        }
        if (n > 0 && (n - 1) % stride != 0) {
            push_point(n - 1);
        }
        flush_segment();

        // legend entry
        const double ly = kTop + 14.0 + 20.0 * static_cast<double>(s);
        const double lx = kLeft + plot_w + 16.0;
        svg += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(lx + 24) +
               "\" y2=\"" + fmt(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt(lx + 30) + "\" y=\"" + fmt(ly + 4) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + escape(sr.label) + "</text>\n";
    }

    svg += "</svg>\n";
    return svg;
}

}  // namespace qb
