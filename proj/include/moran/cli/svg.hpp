#pragma once

#include <string>
#include <vector>

namespace moran::cli {

struct HeatCell {
    double x = 0.0;
    double y = 0.0;
    double value = 0.0;
};

// Heatmap of cells on a regular grid with spacing (dx, dy). Colors come from an
// 8-stop viridis-like ramp over log(value), so the wide dynamic range of the
// sweep stays readable. One <rect> per cell.
std::string render_heatmap(const std::vector<HeatCell>& cells, double dx, double dy, const std::string& title);

}  // namespace moran::cli
