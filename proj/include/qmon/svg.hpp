#pragma once

#include <string>
#include <vector>

namespace qmon {

// Minimal log-log SVG plot: decade grid, polyline series with dash
// patterns, optional point markers, legend.  No external assets, output is
// deterministic.
struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#000000";
  std::string dash;      // stroke-dasharray, empty for solid
  bool line = true;
  bool markers = false;
};

class LogLogPlot {
 public:
  LogLogPlot(std::string title, std::string x_label, std::string y_label);

  void add_series(PlotSeries series);
  std::string render() const;

 private:
  std::string title_, x_label_, y_label_;
  std::vector<PlotSeries> series_;
};

}  // namespace qmon
