#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace fiberld {

/// Objective to minimize. Writes the gradient when grad is non-null. Returns
/// +infinity (or any non-finite value) where the function cannot be
/// evaluated; the line search then backs off.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct OptimizerOptions {
  int max_iter = 500;
  /// Stop when every projected gradient entry is below grad_tol * (1 + |f|).
  double grad_tol = 1e-7;
  /// Stop when a step lowers f by less than f_rel_tol * (1 + |f|).
  double f_rel_tol = 1e-13;
  int max_backtracks = 50;
};

enum class OptimStatus { success, max_iter, line_search_failure };

struct OptimResult {
  Eigen::VectorXd x;
  double f = 0.0;
  Eigen::VectorXd grad;
  OptimStatus status = OptimStatus::success;
  int iterations = 0;
  int evaluations = 0;
  std::vector<double> trace;  ///< f after each accepted step, starting with f(x0)
};

/// Projected BFGS with Armijo backtracking along the projected path. Every
/// trial point is clipped to [lower, upper] before evaluation.
OptimResult minimize_box(const Objective& f, const Eigen::VectorXd& x0,
                         const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                         const OptimizerOptions& opts = {});

/// Central differences, switching to one-sided steps within h of a bound.
Eigen::VectorXd finite_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                           const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& lower,
                                           const Eigen::VectorXd& upper, double step = 1e-6);

}  // namespace fiberld
