#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace addrhash {

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct PlotAxes {
    std::string title;
    std::string x_label;
    std::string y_label;
    double x_min = 0, x_max = 1;
    double y_min = 0, y_max = 1;
    bool log_x = false;
};

// Minimal standalone SVG line chart.
void write_line_chart(std::ostream& out, const PlotAxes& axes, const std::vector<PlotSeries>& series);

}  // namespace addrhash
