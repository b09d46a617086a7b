#pragma once

#include <span>
#include <string>
#include <vector>

namespace enose::svg {

struct Series {
  std::string label;
  std::string color = "#1f77b4";
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> err;  // optional symmetric error bars, same length as y
  bool markers = true;
  bool line = false;
  bool dashed = false;
};

struct Panel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x_ticks;  // empty: chosen from the data
  std::vector<Series> series;
};

/// Panels side by side in one SVG document. Output depends only on the
/// inputs (fixed number formatting, no timestamps).
std::string render(const std::string& title, std::span<const Panel> panels);

/// Palette entry i, cycling.
const std::string& color(std::size_t i);

}  // namespace enose::svg
