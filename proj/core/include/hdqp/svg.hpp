#pragma once

#include <string>
#include <vector>

namespace hdqp::svg {

struct Series {
  std::string label;
  std::string color;    // "black", "#1f4fd0", ...
  bool dashed = false;
  std::vector<double> x;
  std::vector<double> y;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  int width = 720;
  int height = 520;
};

/// Renders a static line plot; no external dependency, CSV stays the
/// authoritative output.
std::string render(const Plot& plot);
void write_file(const Plot& plot, const std::string& path);

}  // namespace hdqp::svg
