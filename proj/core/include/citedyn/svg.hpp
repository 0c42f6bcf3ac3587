#pragma once

#include <string>
#include <vector>

#include "citedyn/types.hpp"

namespace citedyn {

/// One polyline of a chart. x and y must be the same length.
struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color;  ///< CSS color; empty picks from a fixed palette
};

/// A minimal static line chart, written as a standalone SVG file. Output is
/// deterministic: equal charts render byte-identically.
struct SvgChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 720;
  int height = 480;
  std::vector<SvgSeries> series;

  void add_series(std::string label, std::vector<double> x, std::vector<double> y,
                  std::string color = {});
  /// Render to SVG markup. Throws InputError on mismatched series lengths.
  std::string render() const;
  /// Render and write to a file. Throws InputError on I/O failure.
  void write(const std::string& path) const;
};

}  // namespace citedyn
