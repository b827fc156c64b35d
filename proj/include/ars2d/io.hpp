// ars2d - CSV and SVG emission for trajectories and loci.

#ifndef ARS2D_IO_HPP
#define ARS2D_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include "ars2d/flow.hpp"

namespace ars2d {

/// One row per accepted step, 17 significant digits per value.
/// header example: "t,y,z,p_y,p_z".
void write_trajectory_csv(const std::string& path, const Trajectory& tr,
                          const std::string& header);

void write_points_csv(const std::string& path, const std::string& header,
                      const std::vector<std::vector<double>>& rows);

std::string format_g17(double v);

/// Layered line plot in the style of the locus figures: each layer is a
/// polyline with a role-styled stroke.  No timestamps, fully deterministic.
struct SvgLayer {
  std::vector<std::pair<double, double>> points;
  std::string label;
  std::string style;  // "solid" | "dashed" | "dotted"
  std::string color = "#000000";
};

void write_svg_plot(const std::string& path, const std::vector<SvgLayer>& layers,
                    int width = 640, int height = 640);

}  // namespace ars2d

#endif
