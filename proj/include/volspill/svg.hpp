#pragma once

#include "volspill/panel.hpp"

#include <string>
#include <vector>

namespace volspill {

/// One chart: shared x axis (one label per sample, typically dates), any
/// number of overlaid series. NaN values break the line into segments.
struct LineChart {
    struct Series {
        std::string name;
        Vector values;
    };
    std::string title;
    std::vector<std::string> x_labels;
    std::vector<Series> series;
};

std::string render_line_chart(const LineChart& chart, int width = 900, int height = 300);

/// Grid of independently scaled panels, left to right then top to bottom.
std::string render_small_multiples(const std::string& title,
                                   const std::vector<LineChart>& panels, int columns,
                                   int panel_width = 300, int panel_height = 170);

}  // namespace volspill
