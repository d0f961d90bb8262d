#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "fiberld/densities.hpp"
#include "fiberld/geometry.hpp"
#include "fiberld/quadrature.hpp"
#include "fiberld/scales.hpp"

namespace fiberld {

/// Observed lengths in mm, tagged with the scale they were measured on:
/// X for optical fiber analyzer data, V for microscopy.
struct Dataset {
  std::vector<double> values;
  Scale scale = Scale::X;

  std::size_t n() const { return values.size(); }

  /// Throws DataError unless n >= 1 and every value lies in (0, 2r).
  void validate(const CoreGeometry& geom) const;
  /// Throws DataError unless n >= 1 and every value is positive and finite.
  void validate_positive() const;
};

struct LikelihoodEvaluation {
  double loglik = 0.0;
  Eigen::VectorXd gradient;  ///< empty below order 1
  Eigen::MatrixXd hessian;   ///< empty below order 2
  std::vector<double> per_point_loglik;
};

/// Censored mixture log likelihood of OFA data. order selects how many
/// derivatives with respect to theta are returned (0, 1 or 2).
LikelihoodEvaluation ofa_loglik(const ParamVector& theta, const Dataset& data,
                                const CoreGeometry& geom, const QuadratureConfig& cfg = {},
                                int order = 2);

/// Value only, for mixture proportions on the closed interval [0, 1].
double ofa_loglik_value(const MixtureParams& mp, const Dataset& data, const CoreGeometry& geom,
                        const QuadratureConfig& cfg = {});

/// Uncensored mixture likelihood used to find starting values.
LikelihoodEvaluation init_loglik(const ParamVector& theta, const Dataset& data, int order = 2);

/// Microscopy log likelihood of uncut fiber lengths, including the
/// normalizing term -n log k.
LikelihoodEvaluation micro_loglik(const ParamVector& theta, const Dataset& data,
                                  const CoreGeometry& geom, const QuadratureConfig& cfg = {},
                                  int order = 2);

/// Fixed-order pairwise sum, used for every reduction over data points.
double pairwise_sum(const double* values, std::size_t n, std::size_t stride = 1);

}  // namespace fiberld
