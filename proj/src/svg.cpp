#include "niph/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>

#include "niph/error.hpp"
#include "niph/pointcloud_io.hpp"

namespace niph {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// 1-2-5 tick spacing giving roughly `target` ticks.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double step = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
  return step * mag;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto a = cell.find_first_not_of(" \t\r#");
    const auto b = cell.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
  }
  return out;
}

}  // namespace

std::string render_line_plot(const std::vector<PlotSeries>& series, const PlotStyle& style) {
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -x0;
  double y1 = 0.0;
  for (const auto& s : series) {
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
      x0 = std::min(x0, s.x[k]);
      x1 = std::max(x1, s.x[k]);
      y1 = std::max(y1, s.y[k]);
    }
  }
  if (!(x1 >= x0)) {
    x0 = 0.0;
    x1 = 1.0;
  }
  if (x1 - x0 < 1e-12) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  if (!(y1 > 0.0)) y1 = 1.0;
  y1 *= 1.05;

  const double left = 60, right = 150, top = 36, bottom = 48;
  const double pw = style.width - left - right;
  const double ph = style.height - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + ph - y / y1 * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\"" << style.height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!style.title.empty()) {
    svg << "<text x=\"" << left + pw / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">"
        << escape(style.title) << "</text>\n";
  }
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  const double xs = nice_step(x1 - x0, 6);
  for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9 * xs; t += xs) {
    svg << "<line x1=\"" << px(t) << "\" y1=\"" << top + ph << "\" x2=\"" << px(t) << "\" y2=\"" << top + ph + 4
        << "\" stroke=\"black\"/>";
    svg << "<text x=\"" << px(t) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">"
        << format_number(std::abs(t) < 1e-12 * xs ? 0.0 : t) << "</text>\n";
  }
  const double ys = nice_step(y1, 5);
  for (double t = 0.0; t <= y1 + 1e-9 * ys; t += ys) {
    svg << "<line x1=\"" << left - 4 << "\" y1=\"" << py(t) << "\" x2=\"" << left << "\" y2=\"" << py(t)
        << "\" stroke=\"black\"/>";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << py(t) + 4 << "\" text-anchor=\"end\">" << format_number(t)
        << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << style.height - 10 << "\" text-anchor=\"middle\">"
      << escape(style.x_label) << "</text>\n";
  svg << "<text transform=\"translate(16," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(style.y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < series[s].x.size() && k < series[s].y.size(); ++k) {
      if (!std::isfinite(series[s].x[k]) || !std::isfinite(series[s].y[k])) continue;
      svg << format_number(px(series[s].x[k])) << ',' << format_number(py(series[s].y[k])) << ' ';
    }
    svg << "\"/>\n";
    const double ly = top + 10 + 16.0 * static_cast<double>(s);
    svg << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 30 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
    svg << "<text x=\"" << left + pw + 34 << "\" y=\"" << ly + 4 << "\">" << escape(series[s].label)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<PlotSeries> read_plot_series(std::istream& in, const std::string& source, const KdeConfig& kde_cfg) {
  std::string line;
  std::vector<std::string> header;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    header = split(line);
    break;
  }
  auto column = [&](const char* name) {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int ca = column("probe_angle");
  const int cs = column("probe_scale");
  int cx = column("x");
  int cy = column("density");
  bool shifts = false;
  if (cx < 0 || cy < 0) {
    cx = column("shift");
    cy = column("weight");
    shifts = true;
  }
  if (ca < 0 || cs < 0 || cx < 0 || cy < 0) {
    throw InvalidInput(source + ": expected columns probe_angle, probe_scale and either x,density or shift,weight");
  }

  std::map<std::pair<double, double>, PlotSeries> groups;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    auto cell = [&](int col) {
      if (col >= static_cast<int>(cells.size())) throw InvalidInput(source + ":" + std::to_string(lineno) + ": missing column");
      const auto& text = cells[static_cast<std::size_t>(col)];
      double v = 0.0;
      const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
      if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw InvalidInput(source + ":" + std::to_string(lineno) + ": not a number: '" + text + "'");
      }
      return v;
    };
    auto& g = groups[{cell(ca), cell(cs)}];
    g.x.push_back(cell(cx));
    g.y.push_back(cell(cy));
  }
  if (groups.empty()) throw InvalidInput(source + ": no data rows");

  std::vector<PlotSeries> out;
  for (auto& [key, g] : groups) {
    char label[64];
    std::snprintf(label, sizeof label, "%.1f deg, x%.3g", key.first * 180.0 / std::numbers::pi, key.second);
    g.label = label;
    if (shifts) {
      DensityCurve curve;
      try {
        curve = kde(g.x, g.y, scott_bandwidth(g.x, g.y), kde_cfg);
      } catch (const DegenerateInput&) {
        curve = kde(g.x, g.y, std::max(1e-3 * std::abs(g.x.front()), 1e-12), kde_cfg);
      }
      g.x = std::move(curve.grid);
      g.y = std::move(curve.values);
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace niph
