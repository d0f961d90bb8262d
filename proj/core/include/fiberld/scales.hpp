#pragma once

// Densities of the four cell populations and the tree-scale quantities built
// from them:
//
//   W  true lengths in the standing tree
//   Y  true lengths of cells at least partly inside the core
//   X  lengths as observed in the core (cut or uncut), support (0, 2r)
//   V  lengths of uncut fibers in the core (microscopy), support (0, 2r)
//
// Parametric assumptions are made on Y; everything else is derived.

#include <array>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "fiberld/densities.hpp"
#include "fiberld/geometry.hpp"
#include "fiberld/quadrature.hpp"

namespace fiberld {

enum class Scale { W, Y, X, V };
enum class Part { fines, fibers, mixture };

/// Window [lo, hi] in log length outside of which y^{power+1} f(y) falls
/// below tail_cutoff times its peak.
struct LogWindow {
  double lo;
  double hi;
};
LogWindow log_window(const Component& c, int power, const QuadratureConfig& cfg);

/// Integral over (0, inf) of h(y) f(y), evaluated in log space over the
/// component's log window (power selects the tail weight of h).
double integrate_against_density(const Component& c, const std::function<double(double)>& h,
                                 const QuadratureConfig& cfg = {}, int power = 0);

/// Integral of g over (0, 2r). Plain adaptive on (0, r]; on [r, 2r) the
/// substitution x = 2r sin(phi) absorbs a 1/sqrt(4r^2 - x^2) endpoint.
double integrate_observed_window(const std::function<double(double)>& g,
                                 const CoreGeometry& geom, const QuadratureConfig& cfg = {});

// ---------------------------------------------------------------------------
// W scale.

/// Integrals of y^m f(y) / (pi r + 2y) for m = 0..4 and their optimizer-scale
/// gradients (leading dim() entries).
struct WeightedMoments {
  std::array<double, 5> value{};
  std::array<std::array<double, kMaxComponentDim>, 5> gradient{};
};
WeightedMoments weighted_moments(const Component& c, const CoreGeometry& geom,
                                 const QuadratureConfig& cfg, bool with_gradient);

/// E(W) for one component: 1 / (2 I_0) - pi r / 2.
double mean_w_component(const Component& c, const CoreGeometry& geom,
                        const QuadratureConfig& cfg = {});
/// E(W^m), m in 1..4.
double moment_w(int m, const Component& c, const CoreGeometry& geom,
                const QuadratureConfig& cfg = {});
double density_w_component(double w, const Component& c, const CoreGeometry& geom,
                           const QuadratureConfig& cfg = {});

/// Expected cell length in the tree from the component means.
double tree_mean_length(double eps, double mean_fines, double mean_fibers,
                        const CoreGeometry& geom);
/// Fines proportion in the tree given the tree mean and the fines mean.
double tree_fines_proportion(double eps, double tree_mean, double mean_fines,
                             const CoreGeometry& geom);

struct TreeComposition {
  double eps_tilde;
  double mean_w;
  double mean_w_fines;
  double mean_w_fibers;
};
TreeComposition tree_composition(const MixtureParams& mp, const CoreGeometry& geom,
                                 const QuadratureConfig& cfg = {});

// ---------------------------------------------------------------------------
// V scale.

/// k = integral over (0, 2r) of f(v) p_UC(v), with its optimizer-scale
/// gradient and Hessian when requested (order 0, 1 or 2).
struct UncutMass {
  double value = 0.0;
  std::array<double, kMaxComponentDim> gradient{};
  std::array<std::array<double, kMaxComponentDim>, kMaxComponentDim> hessian{};
};
UncutMass uncut_mass(const Component& c, const CoreGeometry& geom, const QuadratureConfig& cfg,
                     int order);

double density_v(double v, const Component& fibers, const CoreGeometry& geom,
                 const QuadratureConfig& cfg = {});

// ---------------------------------------------------------------------------
// X scale.

/// Observed-scale component density and its optimizer-scale derivatives.
struct ObservedTerms {
  double value = 0.0;
  std::array<double, kMaxComponentDim> gradient{};
  std::array<std::array<double, kMaxComponentDim>, kMaxComponentDim> hessian{};
};

/// Evaluates f_X for one component at strictly increasing points in (0, 2r).
/// The tail integrals are accumulated from the top over the segments between
/// consecutive points, so value and derivatives share one subdivision.
std::vector<ObservedTerms> observed_terms(const Component& c, std::span<const double> sorted_points,
                                          const CoreGeometry& geom, const QuadratureConfig& cfg,
                                          int order);

double density_x_component(double x, const Component& c, const CoreGeometry& geom,
                           const QuadratureConfig& cfg = {});

// ---------------------------------------------------------------------------
// Mixtures.

double density_y_mixture(double y, const MixtureParams& mp);
double density_x_mixture(double x, const MixtureParams& mp, const CoreGeometry& geom,
                         const QuadratureConfig& cfg = {});
double density_w_mixture(double w, const MixtureParams& mp, const CoreGeometry& geom,
                         const QuadratureConfig& cfg = {});

using PopulationParams = std::variant<Component, MixtureParams>;

/// A density on one scale for one part of the population, with the per-scale
/// constants (E(W), k, eps~) computed once at construction.
class ScaleDensity {
 public:
  /// Throws DomainError for V with anything other than fibers, or for a
  /// mixture part requested from single-component parameters.
  ScaleDensity(Scale scale, Part part, PopulationParams params, CoreGeometry geom,
               QuadratureConfig cfg = {});

  Scale scale() const noexcept { return scale_; }
  Part part() const noexcept { return part_; }

  /// Lower and upper support limits; the observed scales are open intervals.
  double support_upper() const;

  double operator()(double length) const;
  /// Batch evaluation; X-scale points share one tail sweep.
  std::vector<double> evaluate(std::span<const double> lengths) const;

 private:
  void check_point(double length) const;

  Scale scale_;
  Part part_;
  double eps_ = 0.0;  // weight of fines when part_ == mixture (eps or eps~)
  std::vector<Component> components_;  // one, or {fines, fibers}
  std::vector<double> scale_constants_;  // E(W) per component, or k for V
  CoreGeometry geom_;
  QuadratureConfig cfg_;
};

}  // namespace fiberld
