#pragma once

#include <string>
#include <vector>

namespace sbc::cli {

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
  std::string color = "#1f77b4";
  bool line = false;  // polyline instead of markers
};

struct PlotSpec {
  std::string title, xlabel, ylabel;
  bool logx = false, logy = false;
  std::vector<PlotSeries> series;
};

// Self-contained SVG; points with non-positive coordinates on a log axis are dropped.
std::string render_svg(const PlotSpec& p);

}  // namespace sbc::cli
