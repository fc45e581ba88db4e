#pragma once

#include <string>
#include <vector>

namespace rioc::io {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 720;
  int height = 420;
};

/// Static SVG line chart. Non-finite points (and non-positive ones on a log
/// axis) are skipped.
std::string line_chart(const std::vector<Series>& series, const ChartOptions& opts);

}  // namespace rioc::io
