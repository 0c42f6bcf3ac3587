#include "citedyn/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace citedyn {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 16;
constexpr int kMarginTop = 36;
constexpr int kMarginBottom = 48;

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void SvgChart::add_series(std::string label, std::vector<double> x,
                          std::vector<double> y, std::string color) {
  SvgSeries s;
  s.label = std::move(label);
  s.x = std::move(x);
  s.y = std::move(y);
  s.color = std::move(color);
  series.push_back(std::move(s));
}

std::string SvgChart::render() const {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const SvgSeries& s : series) {
    if (s.x.size() != s.y.size()) {
      throw InputError("SvgChart: series '" + s.label + "' has mismatched x/y lengths");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
    }
  }
  if (!(x_lo <= x_hi)) {  // no finite points at all
    x_lo = 0.0;
    x_hi = 1.0;
    y_lo = 0.0;
    y_hi = 1.0;
  }
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (y_hi == y_lo) y_hi = y_lo + 1.0;

  const double plot_w = width - kMarginLeft - kMarginRight;
  const double plot_h = height - kMarginTop - kMarginBottom;
  const auto px = [&](double x) {
    return kMarginLeft + (x - x_lo) / (x_hi - x_lo) * plot_w;
  };
  const auto py = [&](double y) {
    return kMarginTop + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h;
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
         std::to_string(width) + " " + std::to_string(height) + "\">\n";
  out += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // frame
  out += "  <rect x=\"" + num(kMarginLeft) + "\" y=\"" + num(kMarginTop) + "\" width=\"" +
         num(plot_w) + "\" height=\"" + num(plot_h) +
         "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";

  // ticks and grid (5 divisions per axis)
  for (int i = 0; i <= 4; ++i) {
    const double fx = x_lo + (x_hi - x_lo) * i / 4.0;
    const double fy = y_lo + (y_hi - y_lo) * i / 4.0;
    const double gx = px(fx);
    const double gy = py(fy);
    if (i > 0 && i < 4) {
      out += "  <line x1=\"" + num(gx) + "\" y1=\"" + num(kMarginTop) + "\" x2=\"" +
             num(gx) + "\" y2=\"" + num(kMarginTop + plot_h) +
             "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
      out += "  <line x1=\"" + num(kMarginLeft) + "\" y1=\"" + num(gy) + "\" x2=\"" +
             num(kMarginLeft + plot_w) + "\" y2=\"" + num(gy) +
             "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    }
    out += "  <text x=\"" + num(gx) + "\" y=\"" + num(kMarginTop + plot_h + 18) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
           escape(tick_label(fx)) + "</text>\n";
    out += "  <text x=\"" + num(kMarginLeft - 8) + "\" y=\"" + num(gy + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
           escape(tick_label(fy)) + "</text>\n";
  }

  // series
  std::size_t color_idx = 0;
  for (const SvgSeries& s : series) {
    const std::string color =
        s.color.empty() ? kPalette[color_idx % std::size(kPalette)] : s.color;
    ++color_idx;
    std::string points;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!points.empty()) points += ' ';
      points += num(px(s.x[i])) + "," + num(py(s.y[i]));
    }
    out += "  <polyline fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
  }

  // legend
  double ly = kMarginTop + 14;
  color_idx = 0;
  for (const SvgSeries& s : series) {
    const std::string color =
        s.color.empty() ? kPalette[color_idx % std::size(kPalette)] : s.color;
    ++color_idx;
    if (s.label.empty()) continue;
    const double lx = kMarginLeft + plot_w - 150;
    out += "  <line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" +
           num(lx + 22) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    out += "  <text x=\"" + num(lx + 28) + "\" y=\"" + num(ly) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(s.label) +
           "</text>\n";
    ly += 16;
  }

  // title and axis labels
  if (!title.empty()) {
    out += "  <text x=\"" + num(width / 2.0) + "\" y=\"20\" font-family=\"sans-serif\" " +
           "font-size=\"14\" font-weight=\"bold\" text-anchor=\"middle\">" +
           escape(title) + "</text>\n";
  }
  if (!x_label.empty()) {
    out += "  <text x=\"" + num(kMarginLeft + plot_w / 2.0) + "\" y=\"" +
           num(height - 10.0) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" +
           escape(x_label) + "</text>\n";
  }
  if (!y_label.empty()) {
    out += "  <text x=\"16\" y=\"" + num(kMarginTop + plot_h / 2.0) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" " +
           "transform=\"rotate(-90 16 " + num(kMarginTop + plot_h / 2.0) + ")\">" +
           escape(y_label) + "</text>\n";
  }

  out += "</svg>\n";
  return out;
}

void SvgChart::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out << render();
  out.flush();
  if (!out) throw InputError("failed writing '" + path + "'");
}

}  // namespace citedyn
