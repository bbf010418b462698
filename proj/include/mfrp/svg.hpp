#pragma once

#include <string>
#include <vector>

namespace mfrp {

// Minimal self-contained SVG line plots: axes, ticks, legend, error bars.
// No timestamps or other run-varying content, so output is reproducible.

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> yerr;  // empty or same length as y
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 840;
  int height = 560;
};

std::string render_svg_plot(const PlotSpec& spec,
                            const std::vector<PlotSeries>& series);

void write_svg_plot(const std::string& path, const PlotSpec& spec,
                    const std::vector<PlotSeries>& series);

}  // namespace mfrp
