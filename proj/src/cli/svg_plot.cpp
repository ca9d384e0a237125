#include "shiftorth/cli/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace shiftorth::cli {

namespace {

constexpr double kMarginLeft = 52.0;
constexpr double kMarginRight = 14.0;
constexpr double kMarginTop = 26.0;
constexpr double kMarginBottom = 30.0;
constexpr double kTitleHeight = 30.0;
constexpr const char* kPalette[] = {"#1f5fa8", "#c8452d", "#2e8b57", "#7b4fa0"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", std::abs(x) < 1e-12 ? 0.0 : x);
  return buf;
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

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::max(1.0, std::abs(lo)) * 0.5;
    return {lo - pad, hi + pad};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

void validate(const Panel& panel) {
  if (panel.series.empty()) throw PreconditionError("panel '" + panel.title + "' has no series");
  for (const Series& s : panel.series) {
    if (s.x.size() != s.y.size() || s.x.empty()) {
      throw PreconditionError("series '" + s.label + "' needs equal, nonzero x and y lengths");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        throw PreconditionError("series '" + s.label + "' has non-finite samples");
      }
    }
  }
}

void render_panel(std::string& out, const Panel& panel, double x0, double y0,
                  const SvgLayout& layout) {
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const Series& s : panel.series) {
    const auto [xa, xb] = std::minmax_element(s.x.begin(), s.x.end());
    const auto [ya, yb] = std::minmax_element(s.y.begin(), s.y.end());
    xmin = std::min(xmin, *xa);
    xmax = std::max(xmax, *xb);
    ymin = std::min(ymin, *ya);
    ymax = std::max(ymax, *yb);
  }
  const Range xr = xmax > xmin ? Range{xmin, xmax} : padded(xmin, xmax);
  const Range yr = padded(ymin, ymax);

  const double left = x0 + kMarginLeft;
  const double top = y0 + kMarginTop;
  const double width = layout.panel_width - kMarginLeft - kMarginRight;
  const double height = layout.panel_height - kMarginTop - kMarginBottom;
  auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * width; };
  auto py = [&](double y) { return top + height - (y - yr.lo) / (yr.hi - yr.lo) * height; };

  out += "<g class=\"panel\">\n";
  out += "<text x=\"" + num(left + width / 2) + "\" y=\"" + num(y0 + 17) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + escape(panel.title) + "</text>\n";
  out += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(width) +
         "\" height=\"" + num(height) + "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";

  for (int t = 0; t <= 4; ++t) {
    const double fx = xr.lo + (xr.hi - xr.lo) * t / 4.0;
    const double fy = yr.lo + (yr.hi - yr.lo) * t / 4.0;
    out += "<line x1=\"" + num(px(fx)) + "\" y1=\"" + num(top + height) + "\" x2=\"" +
           num(px(fx)) + "\" y2=\"" + num(top + height + 4) + "\" stroke=\"#444\"/>\n";
    out += "<text x=\"" + num(px(fx)) + "\" y=\"" + num(top + height + 16) +
           "\" text-anchor=\"middle\" font-size=\"10\">" + tick_label(fx) + "</text>\n";
    out += "<line x1=\"" + num(left - 4) + "\" y1=\"" + num(py(fy)) + "\" x2=\"" + num(left) +
           "\" y2=\"" + num(py(fy)) + "\" stroke=\"#444\"/>\n";
    out += "<text x=\"" + num(left - 6) + "\" y=\"" + num(py(fy) + 3) +
           "\" text-anchor=\"end\" font-size=\"10\">" + tick_label(fy) + "</text>\n";
  }
  if (yr.lo < 0.0 && yr.hi > 0.0) {
    out += "<line x1=\"" + num(left) + "\" y1=\"" + num(py(0.0)) + "\" x2=\"" +
           num(left + width) + "\" y2=\"" + num(py(0.0)) +
           "\" stroke=\"#bbb\" stroke-dasharray=\"3,3\"/>\n";
  }

  for (std::size_t s = 0; s < panel.series.size(); ++s) {
    const Series& series = panel.series[s];
    out += "<polyline fill=\"none\" stroke-width=\"1.4\" stroke=\"";
    out += kPalette[s % std::size(kPalette)];
    out += "\" points=\"";
    for (std::size_t i = 0; i < series.x.size(); ++i) {
      if (i > 0) out += ' ';
      out += num(px(series.x[i])) + "," + num(py(series.y[i]));
    }
    out += "\"><title>" + escape(series.label) + "</title></polyline>\n";
  }
  out += "</g>\n";
}

}  // namespace

std::string render_svg(const std::vector<Panel>& panels, const SvgLayout& layout) {
  if (panels.empty()) throw PreconditionError("nothing to plot");
  if (layout.columns < 1) throw PreconditionError("layout needs at least one column");
  for (const Panel& p : panels) validate(p);

  const int columns = std::min<int>(layout.columns, static_cast<int>(panels.size()));
  const int rows = (static_cast<int>(panels.size()) + columns - 1) / columns;
  const double title_h = layout.title.empty() ? 0.0 : kTitleHeight;
  const double width = columns * layout.panel_width;
  const double height = rows * layout.panel_height + title_h;

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) +
         "\" font-family=\"sans-serif\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!layout.title.empty()) {
    out += "<text x=\"" + num(width / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">" +
           escape(layout.title) + "</text>\n";
  }
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const double x0 = static_cast<double>(p % columns) * layout.panel_width;
    const double y0 = title_h + static_cast<double>(p / columns) * layout.panel_height;
    render_panel(out, panels[p], x0, y0, layout);
  }
  out += "</svg>\n";
  return out;
}

void write_svg(const std::filesystem::path& path, const std::vector<Panel>& panels,
               const SvgLayout& layout) {
  const std::string svg = render_svg(panels, layout);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << svg;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace shiftorth::cli
