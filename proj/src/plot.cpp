#include "cumbia/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace cumbia::plot {
namespace {

constexpr double kWidth = 640, kHeight = 520, kMargin = 60;
constexpr const char* kSampleColor = "#1f77b4";
constexpr const char* kVariableColor = "#7f7f7f";
constexpr const char* kUnlisted = "#bbbbbb";
constexpr const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#393b79"};

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s(buf);
  return s == "-0.000" ? "0.000" : s;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo, hi;
  double map(double v, double from, double to) const {
    return hi > lo ? from + (v - lo) / (hi - lo) * (to - from) : (from + to) / 2;
  }
};

Axis range_of(const auto& col) {
  if (col.size() == 0) return {-1, 1};
  double lo = col.minCoeff(), hi = col.maxCoeff();
  const double pad = hi > lo ? 0.05 * (hi - lo) : 1.0;
  return {lo - pad, hi + pad};
}

}  // namespace

ScatterPoints points_of(const Embedding& e) { return {e.coordinates, e.kinds, e.labels}; }

ScatterPoints points_of(const BiplotCoordinates& b) {
  ScatterPoints p;
  p.coordinates.resize(b.sample_coords.rows() + b.variable_coords.rows(), b.sample_coords.cols());
  p.coordinates << b.sample_coords, b.variable_coords;
  p.kinds.assign(static_cast<std::size_t>(b.sample_coords.rows()), ObjectKind::Sample);
  p.kinds.insert(p.kinds.end(), static_cast<std::size_t>(b.variable_coords.rows()), ObjectKind::Variable);
  p.labels = b.sample_labels;
  p.labels.insert(p.labels.end(), b.variable_labels.begin(), b.variable_labels.end());
  return p;
}

std::string scatter_svg(const ScatterPoints& points, Eigen::Index component_x, Eigen::Index component_y,
                        const io::LabelMap& color_by) {
  const Eigen::Index dims = points.coordinates.cols();
  if (component_x < 0 || component_x >= dims || component_y < 0 || component_y >= dims)
    throw ParameterError("component index outside [0, " + std::to_string(dims) + ")");

  std::vector<std::string> groups;
  {
    std::set<std::string> g;
    for (const auto& [label, group] : color_by) g.insert(group);
    groups.assign(g.begin(), g.end());
  }
  auto color_of = [&](std::size_t i) -> std::string {
    if (color_by.empty()) return points.kinds[i] == ObjectKind::Sample ? kSampleColor : kVariableColor;
    auto it = color_by.find(points.labels[i]);
    if (it == color_by.end()) return kUnlisted;
    auto pos = static_cast<std::size_t>(std::find(groups.begin(), groups.end(), it->second) - groups.begin());
    return kPalette[pos % std::size(kPalette)];
  };

  const Axis ax = range_of(points.coordinates.col(component_x));
  const Axis ay = range_of(points.coordinates.col(component_y));
  const double left = kMargin, right = kWidth - 20, top = 20, bottom = kHeight - kMargin;

  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth) + "\" height=\"" + fixed(kHeight) +
         "\" viewBox=\"0 0 " + fixed(kWidth) + ' ' + fixed(kHeight) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fixed(kWidth) + "\" height=\"" + fixed(kHeight) + "\" fill=\"white\"/>\n";
  svg += "<rect x=\"" + fixed(left) + "\" y=\"" + fixed(top) + "\" width=\"" + fixed(right - left) +
         "\" height=\"" + fixed(bottom - top) + "\" fill=\"none\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + fixed((left + right) / 2) + "\" y=\"" + fixed(kHeight - 20) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">Component " +
         std::to_string(component_x + 1) + "</text>\n";
  svg += "<text x=\"20\" y=\"" + fixed((top + bottom) / 2) + "\" transform=\"rotate(-90 20 " +
         fixed((top + bottom) / 2) + ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">Component " +
         std::to_string(component_y + 1) + "</text>\n";

  // Variables drawn first, samples on top.
  for (int pass = 0; pass < 2; ++pass) {
    const ObjectKind want = pass == 0 ? ObjectKind::Variable : ObjectKind::Sample;
    for (std::size_t i = 0; i < points.kinds.size(); ++i) {
      if (points.kinds[i] != want) continue;
      const auto row = static_cast<Eigen::Index>(i);
      const double x = ax.map(points.coordinates(row, component_x), left, right);
      const double y = ay.map(points.coordinates(row, component_y), bottom, top);
      const std::string title = "<title>" + escape(points.labels[i]) + "</title>";
      if (want == ObjectKind::Sample) {
        svg += "<circle class=\"marker sample\" cx=\"" + fixed(x) + "\" cy=\"" + fixed(y) + "\" r=\"4\" fill=\"" +
               color_of(i) + "\">" + title + "</circle>\n";
      } else {
        const double h = 3;
        svg += "<path class=\"marker variable\" d=\"M" + fixed(x - h) + ' ' + fixed(y - h) + 'L' + fixed(x + h) + ' ' +
               fixed(y + h) + 'M' + fixed(x - h) + ' ' + fixed(y + h) + 'L' + fixed(x + h) + ' ' + fixed(y - h) +
               "\" stroke=\"" + color_of(i) + "\" stroke-width=\"1.2\" fill=\"none\">" + title + "</path>\n";
      }
    }
  }
  svg += "</svg>\n";
  return svg;
}

std::string scree_svg(const Scree& s, const std::string& title) {
  const double left = kMargin, right = kWidth - 20, top = 40, bottom = kHeight - kMargin;
  const std::size_t n = s.fractions.size();
  double peak = 0;
  for (double f : s.fractions) peak = std::max(peak, f);
  if (peak <= 0) peak = 1;

  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth) + "\" height=\"" + fixed(kHeight) +
         "\" viewBox=\"0 0 " + fixed(kWidth) + ' ' + fixed(kHeight) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fixed(kWidth) + "\" height=\"" + fixed(kHeight) + "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fixed(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
         escape(title) + "</text>\n";
  svg += "<line x1=\"" + fixed(left) + "\" y1=\"" + fixed(bottom) + "\" x2=\"" + fixed(right) + "\" y2=\"" + fixed(bottom) +
         "\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + fixed((left + right) / 2) + "\" y=\"" + fixed(kHeight - 20) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">Component</text>\n";
  const double slot = n ? (right - left) / static_cast<double>(n) : 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double h = s.fractions[k] / peak * (bottom - top);
    svg += "<rect class=\"bar\" x=\"" + fixed(left + slot * static_cast<double>(k)) + "\" y=\"" + fixed(bottom - h) +
           "\" width=\"" + fixed(std::max(slot * 0.8, 0.5)) + "\" height=\"" + fixed(h) + "\" fill=\"" + kPalette[1] +
           "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace cumbia::plot
