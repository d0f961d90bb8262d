#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include <Eigen/Core>

#include "fiberld/densities.hpp"
#include "fiberld/fitting.hpp"
#include "fiberld/geometry.hpp"
#include "fiberld/quadrature.hpp"

namespace fiberld {

/// W-scale mean, sd, skewness and kurtosis of one component, with gradients
/// over that component's optimizer-scale coordinates.
struct WStatistics {
  std::array<double, 4> value{};  // mean, sd, skewness, kurtosis
  std::array<std::array<double, kMaxComponentDim>, 4> gradient{};

  double mean() const { return value[0]; }
  double sd() const { return value[1]; }
  double skewness() const { return value[2]; }
  double kurtosis() const { return value[3]; }
};

WStatistics w_statistics(const Component& c, const CoreGeometry& geom,
                         const QuadratureConfig& cfg = {}, bool with_gradient = true);

/// eps~ and E(W) for a mixture, with gradients over the full mixture theta.
struct TreeStatistics {
  double eps_tilde = 0.0;
  double mean_w = 0.0;
  Eigen::VectorXd grad_eps_tilde;
  Eigen::VectorXd grad_mean_w;
};

TreeStatistics tree_statistics(const ParamVector& theta, const CoreGeometry& geom,
                               const QuadratureConfig& cfg = {});

struct Statistic {
  double value = 0.0;
  double se = 0.0;  ///< NaN when no covariance is available
  Eigen::VectorXd gradient;  ///< over the full theta vector
};

struct ComponentSummary {
  Statistic mean;
  Statistic sd;
  Statistic skewness;
  Statistic kurtosis;
};

struct SummaryStats {
  std::optional<ComponentSummary> fines;  ///< mixtures only
  ComponentSummary fibers;
  std::optional<Statistic> eps_tilde;
  std::optional<Statistic> mean_w_overall;
  double loglik = 0.0;
  std::size_t n = 0;
  Convergence convergence = Convergence::success;
  bool ses_available = false;
};

/// Plug-in W-scale statistics at the estimates; standard errors are filled by
/// the delta method when the fit carries a covariance matrix.
SummaryStats summary_stats(const FitResult& fit, const QuadratureConfig& cfg = {});

/// As summary_stats, but throws DomainError when no covariance is available.
SummaryStats summary_ses(const FitResult& fit, const QuadratureConfig& cfg = {});

}  // namespace fiberld
