#include "enose/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "enose/io.hpp"

namespace enose::svg {

namespace {

constexpr double kPanelW = 340.0;
constexpr double kPanelH = 280.0;
constexpr double kMarginL = 62.0, kMarginR = 14.0, kMarginT = 30.0, kMarginB = 46.0;
constexpr double kTitleH = 28.0;
constexpr double kLegendRow = 16.0;

std::string esc(const std::string& text) {
  std::string out;
  for (char c : text) {
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

std::string f2(double v) { return format_fixed(v, 2); }

double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  double step = 10.0;
  if (norm <= 1.0) step = 1.0;
  else if (norm <= 2.0) step = 2.0;
  else if (norm <= 5.0) step = 5.0;
  return step * mag;
}

int decimals_for(double step) {
  if (step >= 1.0) return 0;
  return std::min(6, static_cast<int>(std::ceil(-std::log10(step) - 1e-9)));
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish(bool include_zero) {
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (include_zero) lo = std::min(lo, 0.0);
    if (hi - lo <= 0.0) {
      const double pad = std::abs(hi) > 0.0 ? 0.1 * std::abs(hi) : 1.0;
      lo -= pad;
      hi += pad;
    }
  }
};

void render_panel(std::ostringstream& out, const Panel& panel, double ox, double oy) {
  Range xr, yr;
  for (double t : panel.x_ticks) xr.add(t);
  for (const auto& s : panel.series) {
    for (std::size_t i = 0; i < s.y.size(); ++i) {
      xr.add(s.x[i]);
      const double e = i < s.err.size() ? s.err[i] : 0.0;
      yr.add(s.y[i] - e);
      yr.add(s.y[i] + e);
    }
  }
  xr.finish(false);
  yr.finish(true);
  const double xpad = 0.06 * (xr.hi - xr.lo);
  xr.lo -= xpad;
  xr.hi += xpad;
  const double ystep = nice_step(yr.hi - yr.lo, 5);
  yr.lo = std::floor(yr.lo / ystep) * ystep;
  yr.hi = std::ceil(yr.hi / ystep) * ystep;

  const double pw = kPanelW - kMarginL - kMarginR;
  const double ph = kPanelH - kMarginT - kMarginB;
  const double left = ox + kMarginL, top = oy + kMarginT;
  auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return top + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  out << "<g>\n";
  out << "<text x=\"" << f2(ox + kPanelW / 2) << "\" y=\"" << f2(oy + 18) << "\" text-anchor=\"middle\" "
      << "font-size=\"13\">" << esc(panel.title) << "</text>\n";
  out << "<rect x=\"" << f2(left) << "\" y=\"" << f2(top) << "\" width=\"" << f2(pw) << "\" height=\"" << f2(ph)
      << "\" fill=\"none\" stroke=\"#333\"/>\n";

  std::vector<double> xticks = panel.x_ticks;
  int xdec = 0;
  if (xticks.empty()) {
    const double step = nice_step(xr.hi - xr.lo, 5);
    xdec = decimals_for(step);
    for (double t = std::ceil(xr.lo / step) * step; t <= xr.hi + 1e-9 * step; t += step) xticks.push_back(t);
  }
  for (double t : xticks) {
    out << "<line x1=\"" << f2(px(t)) << "\" y1=\"" << f2(top + ph) << "\" x2=\"" << f2(px(t)) << "\" y2=\""
        << f2(top + ph + 4) << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << f2(px(t)) << "\" y=\"" << f2(top + ph + 16) << "\" text-anchor=\"middle\" "
        << "font-size=\"10\">" << format_fixed(t, xdec) << "</text>\n";
  }
  const int ydec = decimals_for(ystep);
  const int ycount = static_cast<int>(std::llround((yr.hi - yr.lo) / ystep));
  for (int k = 0; k <= ycount; ++k) {
    const double t = yr.lo + k * ystep;
    out << "<line x1=\"" << f2(left - 4) << "\" y1=\"" << f2(py(t)) << "\" x2=\"" << f2(left) << "\" y2=\""
        << f2(py(t)) << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << f2(left - 6) << "\" y=\"" << f2(py(t) + 3) << "\" text-anchor=\"end\" "
        << "font-size=\"10\">" << format_fixed(t, ydec) << "</text>\n";
  }
  out << "<text x=\"" << f2(left + pw / 2) << "\" y=\"" << f2(oy + kPanelH - 8) << "\" text-anchor=\"middle\" "
      << "font-size=\"11\">" << esc(panel.x_label) << "</text>\n";
  out << "<text transform=\"translate(" << f2(ox + 14) << "," << f2(top + ph / 2) << ") rotate(-90)\" "
      << "text-anchor=\"middle\" font-size=\"11\">" << esc(panel.y_label) << "</text>\n";

  for (std::size_t si = 0; si < panel.series.size(); ++si) {
    const auto& s = panel.series[si];
    if (s.line && s.x.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\"" << (s.dashed ? " stroke-dasharray=\"4 3\"" : "")
          << " points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) out << (i ? " " : "") << f2(px(s.x[i])) << "," << f2(py(s.y[i]));
      out << "\"/>\n";
    }
    for (std::size_t i = 0; i < s.y.size(); ++i) {
      if (i < s.err.size() && s.err[i] > 0.0) {
        out << "<line x1=\"" << f2(px(s.x[i])) << "\" y1=\"" << f2(py(s.y[i] - s.err[i])) << "\" x2=\""
            << f2(px(s.x[i])) << "\" y2=\"" << f2(py(s.y[i] + s.err[i])) << "\" stroke=\"" << s.color << "\"/>\n";
      }
      if (s.markers) {
        out << "<circle cx=\"" << f2(px(s.x[i])) << "\" cy=\"" << f2(py(s.y[i])) << "\" r=\"3\" fill=\"" << s.color
            << "\"/>\n";
      }
    }
    if (!s.label.empty()) {
      const double ly = top + 10 + static_cast<double>(si) * kLegendRow;
      out << "<rect x=\"" << f2(left + 8) << "\" y=\"" << f2(ly - 7) << "\" width=\"8\" height=\"8\" fill=\""
          << s.color << "\"/>\n";
      out << "<text x=\"" << f2(left + 20) << "\" y=\"" << f2(ly) << "\" font-size=\"10\">" << esc(s.label)
          << "</text>\n";
    }
  }
  out << "</g>\n";
}

}  // namespace

const std::string& color(std::size_t i) {
  static const std::vector<std::string> palette = {"#d62728", "#2ca02c", "#1f77b4", "#ff7f0e",
                                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  return palette[i % palette.size()];
}

std::string render(const std::string& title, std::span<const Panel> panels) {
  const double width = kPanelW * static_cast<double>(std::max<std::size_t>(panels.size(), 1));
  const double height = kPanelH + kTitleH;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f2(width) << "\" height=\"" << f2(height)
      << "\" viewBox=\"0 0 " << f2(width) << " " << f2(height) << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << f2(width / 2) << "\" y=\"19\" text-anchor=\"middle\" font-size=\"15\">" << esc(title)
      << "</text>\n";
  for (std::size_t i = 0; i < panels.size(); ++i) {
    render_panel(out, panels[i], kPanelW * static_cast<double>(i), kTitleH);
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace enose::svg
