#pragma once

#include <string>
#include <vector>

namespace bvlab {

struct PlotPoint {
    double x = 0.0;
    double y = 0.0;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool connect = false;  // polyline through the points in order
};

// Self-contained deterministic SVG scatter/line chart.
std::string render_plot_svg(const PlotSpec& spec, const std::vector<PlotPoint>& points);

// Writes the chart and a CSV twin holding exactly the plotted points.
void write_plot_with_csv_twin(const std::string& svg_path, const std::string& csv_path,
                              const PlotSpec& spec, const std::vector<PlotPoint>& points);

}  // namespace bvlab
