#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "niph/density.hpp"

namespace niph {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotStyle {
  int width = 640;
  int height = 420;
  std::string title;
  std::string x_label = "multiplicative shift";
  std::string y_label = "density";
};

/// Line chart with one polyline per series, axis ticks and a legend.
std::string render_line_plot(const std::vector<PlotSeries>& series, const PlotStyle& style = {});

/// Reads a curves CSV (probe_angle, probe_scale, x, density) or a shifts CSV
/// (probe_angle, probe_scale, shift, weight) and returns one series per
/// probe. Shift files are turned into curves with the weighted KDE.
std::vector<PlotSeries> read_plot_series(std::istream& in, const std::string& source = "<stream>",
                                         const KdeConfig& kde = {});

}  // namespace niph
