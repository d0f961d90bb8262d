#include "fiberld/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fiberld/errors.hpp"

namespace fiberld {
namespace {

constexpr double kPi = std::numbers::pi;

void require_nonnegative(double y, const char* what) {
  if (!(y >= 0.0) || std::isnan(y)) {
    throw DomainError(std::string(what) + ": length must be non-negative, got " +
                      std::to_string(y));
  }
}

// Antiderivative of (8r^2 - 3x^2 + y x) / sqrt(4r^2 - x^2), without the 1/t(y) factor.
double kernel_primitive(double x, double y, double r) {
  const double a = 2.0 * r;
  const double root = std::sqrt(std::max(0.0, a * a - x * x));
  const double arc = std::asin(std::clamp(x / a, -1.0, 1.0));
  return 8.0 * r * r * arc - 3.0 * (0.5 * a * a * arc - 0.5 * x * root) - y * root;
}

}  // namespace

CoreGeometry::CoreGeometry(double radius_mm) : radius_(radius_mm) {
  if (!(radius_mm > 0.0) || !std::isfinite(radius_mm)) {
    throw DomainError("core radius must be positive and finite, got " +
                      std::to_string(radius_mm));
  }
}

double area_factor(double y, const CoreGeometry& geom) {
  require_nonnegative(y, "area_factor");
  const double r = geom.radius();
  return kPi * r * r + 2.0 * r * y;
}

double prob_uncut(double y, const CoreGeometry& geom) {
  require_nonnegative(y, "prob_uncut");
  const double r = geom.radius();
  if (y == 0.0) return 1.0;
  if (y >= 2.0 * r) return 0.0;
  const double root = std::sqrt(std::max(0.0, 4.0 * r * r - y * y));
  const double arc = std::asin(std::clamp(root / (2.0 * r), 0.0, 1.0));
  const double p = (2.0 * r * r * arc - 0.5 * y * root) / area_factor(y, geom);
  return std::clamp(p, 0.0, 1.0);
}

double cut_kernel(double x, double y, const CoreGeometry& geom) {
  const double r = geom.radius();
  if (!(x > 0.0) || !(x < 2.0 * r) || !(x < y)) {
    throw DomainError("cut_kernel: requires 0 < x < min(y, 2r), got x=" + std::to_string(x) +
                      " y=" + std::to_string(y));
  }
  return (8.0 * r * r - 3.0 * x * x + y * x) /
         (area_factor(y, geom) * std::sqrt(4.0 * r * r - x * x));
}

double cut_kernel_mass(double x, double y, const CoreGeometry& geom) {
  const double r = geom.radius();
  if (!(x >= 0.0) || x > std::min(y, 2.0 * r)) {
    throw DomainError("cut_kernel_mass: requires 0 <= x <= min(y, 2r), got x=" +
                      std::to_string(x) + " y=" + std::to_string(y));
  }
  return (kernel_primitive(x, y, r) - kernel_primitive(0.0, y, r)) / area_factor(y, geom);
}

}  // namespace fiberld
