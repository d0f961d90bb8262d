#pragma once

#include <string>
#include <vector>

namespace fiberfit {

struct PlotSpec {
  std::string title;
  std::string x_label = "length (mm)";
  std::string y_label = "density";
  std::vector<double> x;
  std::vector<double> y;
  /// Raw observations for a density-scaled histogram behind the curve.
  std::vector<double> data;
};

std::string render_svg(const PlotSpec& plot);

}  // namespace fiberfit
