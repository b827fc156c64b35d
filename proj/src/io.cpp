#include "ars2d/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ars2d {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& tr,
                          const std::string& header) {
  auto out = open_or_throw(path);
  out << header << "\n";
  const auto& ts = tr.times();
  const auto& ys = tr.states();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    out << format_g17(ts[i]);
    for (double v : ys[i]) out << "," << format_g17(v);
    out << "\n";
  }
}

void write_points_csv(const std::string& path, const std::string& header,
                      const std::vector<std::vector<double>>& rows) {
  auto out = open_or_throw(path);
  out << header << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      out << format_g17(row[i]);
    }
    out << "\n";
  }
}

void write_svg_plot(const std::string& path, const std::vector<SvgLayer>& layers, int width,
                    int height) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& l : layers) {
    for (const auto& [x, y] : l.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmin > xmax) {
    xmin = ymin = -1.0;
    xmax = ymax = 1.0;
  }
  const double padx = 0.08 * std::max(xmax - xmin, 1e-12);
  const double pady = 0.08 * std::max(ymax - ymin, 1e-12);
  xmin -= padx;
  xmax += padx;
  ymin -= pady;
  ymax += pady;
  const double margin = 40.0;
  const double sx = (width - 2 * margin) / (xmax - xmin);
  const double sy = (height - 2 * margin) / (ymax - ymin);
  auto X = [&](double x) { return margin + (x - xmin) * sx; };
  auto Y = [&](double y) { return height - margin - (y - ymin) * sy; };

  auto out = open_or_throw(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // axes through the origin when visible
  if (xmin < 0 && xmax > 0)
    out << "<line x1=\"" << X(0) << "\" y1=\"" << Y(ymin) << "\" x2=\"" << X(0) << "\" y2=\""
        << Y(ymax) << "\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";
  if (ymin < 0 && ymax > 0)
    out << "<line x1=\"" << X(xmin) << "\" y1=\"" << Y(0) << "\" x2=\"" << X(xmax)
        << "\" y2=\"" << Y(0) << "\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";

  int legend_row = 0;
  for (const auto& l : layers) {
    std::string dash;
    if (l.style == "dashed") dash = " stroke-dasharray=\"8,5\"";
    else if (l.style == "dotted") dash = " stroke-dasharray=\"2,4\"";
    out << "<polyline fill=\"none\" stroke=\"" << l.color << "\" stroke-width=\"1.5\"" << dash
        << " points=\"";
    for (const auto& [x, y] : l.points) out << X(x) << "," << Y(y) << " ";
    out << "\"/>\n";
    // legend: line sample + label
    const double ly = margin + 16.0 * legend_row++;
    out << "<line x1=\"" << (width - margin - 120) << "\" y1=\"" << ly << "\" x2=\""
        << (width - margin - 90) << "\" y2=\"" << ly << "\" stroke=\"" << l.color
        << "\" stroke-width=\"1.5\"" << dash << "/>\n";
    out << "<text x=\"" << (width - margin - 84) << "\" y=\"" << (ly + 4)
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << l.label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace ars2d
