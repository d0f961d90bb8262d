#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace fiberfit {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

std::vector<double> nice_ticks(double lo, double hi, int target) {
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> out;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
    out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const PlotSpec& plot) {
  double x_lo = plot.x.empty() ? 0.0 : *std::min_element(plot.x.begin(), plot.x.end());
  double x_hi = plot.x.empty() ? 1.0 : *std::max_element(plot.x.begin(), plot.x.end());
  x_lo = std::min(x_lo, 0.0);
  double y_hi = 0.0;
  for (double v : plot.y) {
    if (std::isfinite(v)) y_hi = std::max(y_hi, v);
  }

  std::vector<double> bins;
  double bin_width = 0.0;
  if (!plot.data.empty()) {
    const int nbins = std::clamp(static_cast<int>(std::sqrt(static_cast<double>(plot.data.size()))), 5, 60);
    bin_width = (x_hi - x_lo) / nbins;
    bins.assign(static_cast<std::size_t>(nbins), 0.0);
    for (double d : plot.data) {
      const int b = static_cast<int>((d - x_lo) / bin_width);
      if (b >= 0 && b < nbins) bins[static_cast<std::size_t>(b)] += 1.0;
    }
    for (double& b : bins) {
      b /= static_cast<double>(plot.data.size()) * bin_width;
      y_hi = std::max(y_hi, b);
    }
  }
  if (!(y_hi > 0.0)) y_hi = 1.0;
  y_hi *= 1.05;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto sy = [&](double y) { return kTop + ph - y / y_hi * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << escape(plot.title) << "</text>\n";

  for (std::size_t b = 0; b < bins.size(); ++b) {
    const double x0 = x_lo + bin_width * static_cast<double>(b);
    os << "<rect x=\"" << num(sx(x0)) << "\" y=\"" << num(sy(bins[b])) << "\" width=\""
       << num(sx(x0 + bin_width) - sx(x0)) << "\" height=\"" << num(sy(0.0) - sy(bins[b]))
       << "\" fill=\"#d9d9d9\" stroke=\"#999999\" stroke-width=\"0.5\"/>\n";
  }

  os << "<g stroke=\"black\" stroke-width=\"1\">\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << num(sy(0)) << "\" x2=\"" << kLeft + pw << "\" y2=\""
     << num(sy(0)) << "\"/>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
     << num(sy(0)) << "\"/>\n";
  for (double t : nice_ticks(x_lo, x_hi, 6)) {
    os << "<line x1=\"" << num(sx(t)) << "\" y1=\"" << num(sy(0)) << "\" x2=\"" << num(sx(t))
       << "\" y2=\"" << num(sy(0) + 5) << "\"/>\n";
  }
  for (double t : nice_ticks(0.0, y_hi, 5)) {
    os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(sy(t)) << "\" x2=\"" << kLeft
       << "\" y2=\"" << num(sy(t)) << "\"/>\n";
  }
  os << "</g>\n";
  for (double t : nice_ticks(x_lo, x_hi, 6)) {
    os << "<text x=\"" << num(sx(t)) << "\" y=\"" << num(sy(0) + 18) << "\" text-anchor=\"middle\">"
       << label(t) << "</text>\n";
  }
  for (double t : nice_ticks(0.0, y_hi, 5)) {
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(sy(t) + 4) << "\" text-anchor=\"end\">"
       << label(t) << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12
     << "\" text-anchor=\"middle\">" << escape(plot.x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << kTop + ph / 2 << ")\">" << escape(plot.y_label) << "</text>\n";

  os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.8\" points=\"";
  for (std::size_t i = 0; i < plot.x.size(); ++i) {
    if (!std::isfinite(plot.y[i])) continue;
    os << num(sx(plot.x[i])) << "," << num(sy(std::min(plot.y[i], y_hi))) << " ";
  }
  os << "\"/>\n</svg>\n";
  return os.str();
}

}  // namespace fiberfit
