#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fiberld/densities.hpp"
#include "fiberld/geometry.hpp"
#include "fiberld/likelihood.hpp"
#include "fiberld/quadrature.hpp"

namespace fiberld {

enum class DataType { ofa, microscopy };

struct ModelSpec {
  Family family = Family::ggamma;
  DataType data_type = DataType::ofa;
  CoreGeometry geom{1.0};

  Layout layout() const { return data_type == DataType::ofa ? Layout::mixture : Layout::single; }
};

enum class GradMode { analytic, finite_difference };

enum class Convergence { success, max_iter, line_search_failure, singular_hessian };

const char* to_string(Convergence c);

/// All vectors are on the original scale, in print order (eps first for
/// mixtures, fines before fibers).
struct FitConfig {
  std::optional<Eigen::VectorXd> lower;
  std::optional<Eigen::VectorXd> upper;
  std::optional<Eigen::VectorXd> par_start;
  std::vector<bool> fixed_mask;
  int n_starts = 5;
  GradMode grad_mode = GradMode::analytic;
  int max_iter = 500;
  double grad_tol = 1e-7;
  std::uint64_t seed = 1;
  QuadratureConfig quad;
};

struct StartReport {
  int index = 0;
  double loglik = 0.0;
  int iterations = 0;
  std::string status;  ///< optimizer status, or the error that ended the start
  bool ok = false;
};

struct FitResult {
  ModelSpec model;
  ParamVector theta_hat;
  Eigen::VectorXd theta_tilde_hat;
  double loglik = 0.0;
  Eigen::MatrixXd hessian;    ///< of the log likelihood on the theta scale
  Eigen::MatrixXd cov_theta;  ///< empty when unavailable
  Eigen::MatrixXd cov_tilde;
  Eigen::VectorXd se_theta;
  Eigen::VectorXd se_tilde;
  Convergence convergence = Convergence::success;
  std::size_t n = 0;
  int starts_tried = 0;
  int best_start = 0;
  int iterations = 0;
  bool init_fallback = false;
  /// The optimizer's fines and fibers blocks were exchanged so that the
  /// fines component is the shorter one.
  bool labels_swapped = false;
  std::vector<double> trace;  ///< -loglik / n after each accepted step of the best start
  std::vector<StartReport> starts;

  bool has_covariance() const { return cov_theta.size() > 0; }
};

/// Every start failed.
class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, std::vector<StartReport> starts)
      : std::runtime_error(what), starts_(std::move(starts)) {}
  const std::vector<StartReport>& starts() const noexcept { return starts_; }

 private:
  std::vector<StartReport> starts_;
};

/// Default optimizer-scale box on the original scale, print order.
void default_bounds(Family family, Layout layout, Eigen::VectorXd& lower, Eigen::VectorXd& upper);

/// Default mixture start for the generalized gamma:
/// theta = (0, log .01, log .1, log 10, log 2, log 2, log 2).
ParamVector default_ggd_start();

/// Log likelihood matching the model's data type.
LikelihoodEvaluation model_loglik(const ParamVector& theta, const Dataset& data,
                                  const ModelSpec& model, const QuadratureConfig& cfg, int order);

/// Starting point for the censored fit. A supplied par_start is encoded and
/// returned unchanged. fell_back is set when the uncensored fit failed and the
/// default start was returned instead.
ParamVector initialize(const Dataset& data, const ModelSpec& model, const FitConfig& cfg,
                       bool* fell_back = nullptr);

FitResult fit(const Dataset& data, const ModelSpec& model, const FitConfig& cfg = {});

/// Delta-method covariance of the original-scale estimates. Throws
/// DomainError when the fit carries no covariance.
Eigen::MatrixXd covariance_original_scale(const FitResult& fit);

/// (-H)^{-1} over the free coordinates, zero rows and columns for fixed ones.
/// Empty when -H restricted to the free coordinates is not positive definite.
Eigen::MatrixXd inverse_negative_hessian(const Eigen::MatrixXd& hessian,
                                         const std::vector<bool>& fixed = {});

/// diag(chain) cov diag(chain).
Eigen::MatrixXd delta_covariance(const Eigen::MatrixXd& cov, const Eigen::VectorXd& chain);

/// Square roots of the diagonal; NaN where the variance is below -1e-10.
Eigen::VectorXd standard_errors(const Eigen::MatrixXd& cov);

}  // namespace fiberld
