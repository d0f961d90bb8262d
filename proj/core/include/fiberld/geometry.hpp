#pragma once

namespace fiberld {

/// Cross-section of an increment core. The diameter 2r is the longest
/// length an instrument can observe inside the core.
class CoreGeometry {
 public:
  /// Throws DomainError unless radius_mm is positive and finite.
  explicit CoreGeometry(double radius_mm);

  double radius() const noexcept { return radius_; }
  double diameter() const noexcept { return 2.0 * radius_; }

 private:
  double radius_;
};

/// t(y) = pi r^2 + 2 r y, the area of core positions that intersect a cell
/// of length y.
double area_factor(double y, const CoreGeometry& geom);

/// Probability that a cell of true length y lies entirely inside the core.
/// Equals 1 at y = 0 (limit) and 0 for y >= 2r.
double prob_uncut(double y, const CoreGeometry& geom);

/// Conditional sub-density of the observed (cut) length x given true length
/// y. Defined for 0 < x < min(y, 2r).
double cut_kernel(double x, double y, const CoreGeometry& geom);

/// Integral of cut_kernel(s | y) over s in (0, x], for 0 <= x <= min(y, 2r).
/// Elementary closed form; at x = min(y, 2r) it equals 1 - prob_uncut(y).
double cut_kernel_mass(double x, double y, const CoreGeometry& geom);

}  // namespace fiberld
