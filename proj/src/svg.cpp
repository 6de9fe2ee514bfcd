#include "qmon/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace qmon {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 24.0;
constexpr double kTop = 42.0;
constexpr double kBottom = 58.0;

std::string fmt(const char* pattern, double a, double b = 0.0,
                double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

bool plottable(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

LogLogPlot::LogLogPlot(std::string title, std::string x_label,
                       std::string y_label)
    : title_(std::move(title)),
      x_label_(std::move(x_label)),
      y_label_(std::move(y_label)) {}

void LogLogPlot::add_series(PlotSeries series) {
  series_.push_back(std::move(series));
}

std::string LogLogPlot::render() const {
  double lx0 = std::numeric_limits<double>::infinity(), lx1 = -lx0;
  double ly0 = lx0, ly1 = -lx0;
  for (const auto& s : series_)
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      if (plottable(s.x[i]) && plottable(s.y[i])) {
        lx0 = std::min(lx0, std::log10(s.x[i]));
        lx1 = std::max(lx1, std::log10(s.x[i]));
        ly0 = std::min(ly0, std::log10(s.y[i]));
        ly1 = std::max(ly1, std::log10(s.y[i]));
      }
  if (!(lx0 <= lx1)) { lx0 = 0.0; lx1 = 1.0; ly0 = 0.0; ly1 = 1.0; }
  lx0 = std::floor(lx0 - 1e-9);
  lx1 = std::ceil(lx1 + 1e-9);
  ly0 = std::floor(ly0 - 1e-9);
  ly1 = std::ceil(ly1 + 1e-9);
  if (lx1 - lx0 < 1.0) lx1 = lx0 + 1.0;
  if (ly1 - ly0 < 1.0) ly1 = ly0 + 1.0;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) {
    return kLeft + (std::log10(x) - lx0) / (lx1 - lx0) * pw;
  };
  auto py = [&](double y) {
    return kHeight - kBottom - (std::log10(y) - ly0) / (ly1 - ly0) * ph;
  };

  std::string svg;
  svg += fmt("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" "
             "height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
             kWidth, kHeight, kWidth, kHeight);
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  svg += fmt("<text x=\"%.1f\" y=\"24\" font-family=\"sans-serif\" "
             "font-size=\"15\" text-anchor=\"middle\">",
             kLeft + pw / 2.0) +
         xml_escape(title_) + "</text>\n";

  // decade grid and tick labels
  for (int k = static_cast<int>(lx0); k <= static_cast<int>(lx1); ++k) {
    const double x = px(std::pow(10.0, k));
    svg += fmt("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
               "stroke=\"#dddddd\"/>\n",
               x, kTop, x, kHeight - kBottom);
    svg += fmt("<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" "
               "font-size=\"12\" text-anchor=\"middle\">",
               x, kHeight - kBottom + 18.0) +
           fmt("1e%.0f", static_cast<double>(k)) + "</text>\n";
  }
  for (int k = static_cast<int>(ly0); k <= static_cast<int>(ly1); ++k) {
    const double y = py(std::pow(10.0, k));
    svg += fmt("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
               "stroke=\"#dddddd\"/>\n",
               kLeft, y, kWidth - kRight, y);
    svg += fmt("<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" "
               "font-size=\"12\" text-anchor=\"end\">",
               kLeft - 6.0, y + 4.0) +
           fmt("1e%.0f", static_cast<double>(k)) + "</text>\n";
  }
  svg += fmt("<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" "
             "fill=\"none\" stroke=\"#000000\"/>\n",
             kLeft, kTop, pw, ph);
  svg += fmt("<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" "
             "font-size=\"13\" text-anchor=\"middle\">",
             kLeft + pw / 2.0, kHeight - 16.0) +
         xml_escape(x_label_) + "</text>\n";
  svg += fmt("<text x=\"20\" y=\"%.1f\" font-family=\"sans-serif\" "
             "font-size=\"13\" text-anchor=\"middle\" "
             "transform=\"rotate(-90 20 %.1f)\">",
             kTop + ph / 2.0, kTop + ph / 2.0) +
         xml_escape(y_label_) + "</text>\n";

  for (const auto& s : series_) {
    if (s.line) {
      std::string pts;
      for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!plottable(s.x[i]) || !plottable(s.y[i])) continue;
        pts += fmt("%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
      }
      if (!pts.empty()) {
        svg += "<polyline fill=\"none\" stroke=\"" + s.color +
               "\" stroke-width=\"1.5\"";
        if (!s.dash.empty()) svg += " stroke-dasharray=\"" + s.dash + "\"";
        svg += " points=\"" + pts + "\"/>\n";
      }
    }
    if (s.markers) {
      for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!plottable(s.x[i]) || !plottable(s.y[i])) continue;
        svg += fmt("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" ", px(s.x[i]),
                   py(s.y[i])) +
               "fill=\"none\" stroke=\"" + s.color +
               "\" stroke-width=\"1.5\"/>\n";
      }
    }
  }

  // legend, top right corner of the plot area
  double ly = kTop + 16.0;
  for (const auto& s : series_) {
    const double x0 = kWidth - kRight - 170.0;
    if (s.line) {
      svg += fmt("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" ", x0,
                 ly - 4.0, x0 + 28.0, ly - 4.0) +
             "stroke=\"" + s.color + "\" stroke-width=\"1.5\"";
      if (!s.dash.empty()) svg += " stroke-dasharray=\"" + s.dash + "\"";
      svg += "/>\n";
    }
    if (s.markers)
      svg += fmt("<circle cx=\"%.1f\" cy=\"%.1f\" r=\"3\" ", x0 + 14.0,
                 ly - 4.0) +
             "fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\"/>\n";
    svg += fmt("<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" "
               "font-size=\"12\">",
               x0 + 34.0, ly) +
           xml_escape(s.name) + "</text>\n";
    ly += 17.0;
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace qmon
