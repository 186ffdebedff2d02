#include "svg.hpp"

#include <coopdyn/serialize.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace coopdyn::cli {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape_xml(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

std::string fixed2(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

Range padded_range(double lo, double hi) {
    if (!(lo <= hi)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (lo == hi) {
        const double pad = (lo == 0.0) ? 1.0 : std::abs(lo) * 0.1;
        return {lo - pad, hi + pad};
    }
    const double pad = (hi - lo) * 0.06;
    return {lo - pad, hi + pad};
}

// Tick positions at a "nice" step (1, 2 or 5 times a power of ten).
std::vector<double> nice_ticks(const Range& r, int target) {
    const double span = r.hi - r.lo;
    if (!(span > 0.0) || !std::isfinite(span)) return {r.lo};
    double step = std::pow(10.0, std::floor(std::log10(span / double(target))));
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (span / (step * mult) <= double(target)) {
            step *= mult;
            break;
        }
    }
    std::vector<double> ticks;
    double t = std::ceil(r.lo / step) * step;
    for (; t <= r.hi + step * 1e-9; t += step) ticks.push_back(t == 0.0 ? 0.0 : t);
    return ticks;
}

} // namespace

std::string line_plot(const PlotOptions& options, const std::vector<PlotSeries>& series) {
    const int left = 72, right = 24, top = 44, bottom = 58;
    const double plot_w = double(options.width - left - right);
    const double plot_h = double(options.height - top - bottom);

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const PlotSeries& s : series)
        for (const auto& p : s.points) {
            xmin = std::min(xmin, p[0]);
            xmax = std::max(xmax, p[0]);
            ymin = std::min(ymin, p[1]);
            ymax = std::max(ymax, p[1]);
        }
    const Range xr = padded_range(xmin, xmax);
    const Range yr = padded_range(ymin, ymax);

    auto sx = [&](double x) { return double(left) + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    auto sy = [&](double y) {
        return double(top) + (1.0 - (y - yr.lo) / (yr.hi - yr.lo)) * plot_h;
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
        << "\" height=\"" << options.height << "\" viewBox=\"0 0 " << options.width << " "
        << options.height << "\">\n";

    // Embedded data block: one CSV table per series.
    svg << "<!-- data\n";
    for (const PlotSeries& s : series) {
        svg << "series: " << s.label << "\nx,y\n";
        for (const auto& p : s.points)
            svg << format_double(p[0]) << "," << format_double(p[1]) << "\n";
    }
    svg << "-->\n";

    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << options.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << escape_xml(options.title)
        << "</text>\n";

    // Grid and ticks.
    for (double t : nice_ticks(xr, 6)) {
        const double x = sx(t);
        svg << "<line x1=\"" << fixed2(x) << "\" y1=\"" << top << "\" x2=\"" << fixed2(x)
            << "\" y2=\"" << top + int(plot_h) << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << fixed2(x) << "\" y=\"" << top + int(plot_h) + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(t) << "</text>\n";
    }
    for (double t : nice_ticks(yr, 5)) {
        const double y = sy(t);
        svg << "<line x1=\"" << left << "\" y1=\"" << fixed2(y) << "\" x2=\""
            << left + int(plot_w) << "\" y2=\"" << fixed2(y) << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << left - 6 << "\" y=\"" << fixed2(y + 4.0)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << tick_label(t) << "</text>\n";
    }

    // Axes.
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << int(plot_w)
        << "\" height=\"" << int(plot_h) << "\" fill=\"none\" stroke=\"#333333\"/>\n";
    svg << "<text x=\"" << left + int(plot_w) / 2 << "\" y=\"" << options.height - 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << escape_xml(options.x_label) << "</text>\n";
    svg << "<text x=\"20\" y=\"" << top + int(plot_h) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 20 " << top + int(plot_h) / 2 << ")\">"
        << escape_xml(options.y_label) << "</text>\n";

    // Series.
    for (std::size_t i = 0; i < series.size(); ++i) {
        const PlotSeries& s = series[i];
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        if (s.line && s.points.size() > 1) {
            svg << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& p : s.points) svg << fixed2(sx(p[0])) << "," << fixed2(sy(p[1])) << " ";
            svg << "\"/>\n";
        }
        if (s.markers)
            for (const auto& p : s.points)
                svg << "<circle cx=\"" << fixed2(sx(p[0])) << "\" cy=\"" << fixed2(sy(p[1]))
                    << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        // Legend entry.
        const int ly = top + 16 + int(i) * 16;
        svg << "<rect x=\"" << left + 10 << "\" y=\"" << ly - 9
            << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
        svg << "<text x=\"" << left + 26 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(s.label)
            << "</text>\n";
    }

    svg << "</svg>\n";
    return svg.str();
}

} // namespace coopdyn::cli
