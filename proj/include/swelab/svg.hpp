#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace swelab::svg {

struct Point {
    double x = 0.0;
    double y = 0.0;
    double y_err = 0.0;  // symmetric error bar halfwidth; 0 = none
};

struct Series {
    std::string label;
    std::vector<Point> points;
};

/// Minimal line plot: framed axes with ticks, one polyline per series with
/// optional error bars, legend in the top-left corner. Empty series lists
/// still produce a valid plot frame.
void write_line_plot(std::ostream& out, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series);

}  // namespace swelab::svg
