#pragma once
// Self-contained SVG plots: no scripts, no external assets, one file per
// figure. Colors for heatmaps come from a fixed 8-bit ramp interpolated
// linearly between the stops documented next to `heat_color`.
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spdc {

// intensity in [0, 1] -> RGB; clamped outside
std::array<uint8_t, 3> heat_color(double v);

// Heatmap of z(i, j) where i indexes x and j indexes y, drawn over the axis
// ranges [x_lo, x_hi] and [y_lo, y_hi]. Large matrices are block-averaged
// down to at most ~200 cells per axis; values are shown on a square-root
// scale so weak structure stays visible next to sharp resonances.
void write_heatmap_svg(const std::string& path, const std::string& title,
                       const std::string& x_label, const std::string& y_label,
                       const Eigen::MatrixXd& z, double x_lo, double x_hi,
                       double y_lo, double y_hi);

struct LineSeries {
  std::string label;
  std::vector<double> x, y;
};

void write_lineplot_svg(const std::string& path, const std::string& title,
                        const std::string& x_label, const std::string& y_label,
                        const std::vector<LineSeries>& series);

}  // namespace spdc
