// svg.hpp — Minimal self-contained SVG line plots.  Every plot embeds the
// plotted numbers as a CSV comment so the figure can be regenerated or
// re-analyzed without any external tooling.

#pragma once

#include <array>
#include <string>
#include <vector>

namespace coopdyn::cli {

struct PlotSeries {
    std::string label;
    std::vector<std::array<double, 2>> points; // (x, y)
    bool line = true;
    bool markers = true;
};

struct PlotOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    int width = 720;
    int height = 460;
};

// Renders the series to a standalone SVG document.
std::string line_plot(const PlotOptions& options, const std::vector<PlotSeries>& series);

} // namespace coopdyn::cli
