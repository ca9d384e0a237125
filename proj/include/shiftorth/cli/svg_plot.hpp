#pragma once

// Minimal self-contained SVG line plots: a grid of panels, each with axes,
// tick labels and one or more polylines.

#include <filesystem>
#include <string>
#include <vector>

#include "shiftorth/types.hpp"

namespace shiftorth::cli {

struct Series {
  std::string label;
  RealVector x;
  RealVector y;
};

struct Panel {
  std::string title;
  std::vector<Series> series;
};

struct SvgLayout {
  std::string title;
  int columns = 2;
  double panel_width = 360.0;
  double panel_height = 220.0;
};

/// Throws PreconditionError for mismatched x/y lengths, empty series or
/// non-finite samples.
std::string render_svg(const std::vector<Panel>& panels, const SvgLayout& layout);
void write_svg(const std::filesystem::path& path, const std::vector<Panel>& panels,
               const SvgLayout& layout);

}  // namespace shiftorth::cli
