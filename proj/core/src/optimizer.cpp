#include "fiberld/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "fiberld/errors.hpp"

namespace fiberld {
namespace {

Eigen::VectorXd project(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                        const Eigen::VectorXd& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

Eigen::VectorXd projected_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                                   const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  Eigen::VectorXd pg = g;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) <= lo(i) && g(i) > 0.0) pg(i) = 0.0;
    if (x(i) >= hi(i) && g(i) < 0.0) pg(i) = 0.0;
  }
  return pg;
}

}  // namespace

OptimResult minimize_box(const Objective& f, const Eigen::VectorXd& x0,
                         const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                         const OptimizerOptions& opts) {
  const Eigen::Index n = x0.size();
  if (lower.size() != n || upper.size() != n) throw DomainError("bound sizes do not match x0");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(lower(i) <= upper(i))) throw DomainError("lower bound exceeds upper bound");
  }

  OptimResult r;
  r.x = project(x0, lower, upper);
  r.grad = Eigen::VectorXd::Zero(n);
  r.f = f(r.x, &r.grad);
  ++r.evaluations;
  if (!std::isfinite(r.f) || !r.grad.allFinite()) {
    throw DomainError("objective is not finite at the starting point");
  }
  r.trace.push_back(r.f);
  if (n == 0) return r;

  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  bool fresh = true;
  Eigen::VectorXd g_new(n);

  while (true) {
    const Eigen::VectorXd pg = projected_gradient(r.x, r.grad, lower, upper);
    if (pg.cwiseAbs().maxCoeff() <= opts.grad_tol * (1.0 + std::abs(r.f))) {
      r.status = OptimStatus::success;
      return r;
    }
    if (r.iterations >= opts.max_iter) {
      r.status = OptimStatus::max_iter;
      return r;
    }

    // Coordinates held at a bound by the gradient are frozen for this step.
    std::vector<bool> active(n, false);
    for (Eigen::Index i = 0; i < n; ++i) active[i] = pg(i) == 0.0 && r.grad(i) != 0.0;
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (active[i]) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!active[j]) d(i) -= h(i, j) * r.grad(j);
      }
    }
    if (!(r.grad.dot(d) < 0.0)) {
      h.setIdentity();
      fresh = true;
      d = -pg;
    }

    double alpha = 1.0;
    if (fresh) alpha = std::min(1.0, 1.0 / d.cwiseAbs().maxCoeff());
    bool accepted = false;
    Eigen::VectorXd x_new(n);
    double f_new = 0.0;
    for (int bt = 0; bt < opts.max_backtracks; ++bt) {
      x_new = project(r.x + alpha * d, lower, upper);
      const Eigen::VectorXd step = x_new - r.x;
      if (step.cwiseAbs().maxCoeff() == 0.0) break;
      f_new = f(x_new, &g_new);
      ++r.evaluations;
      if (std::isfinite(f_new) && g_new.allFinite() &&
          f_new <= r.f + 1e-4 * r.grad.dot(step)) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (!fresh) {
        h.setIdentity();
        fresh = true;
        continue;
      }
      r.status = OptimStatus::line_search_failure;
      return r;
    }

    const Eigen::VectorXd s = x_new - r.x;
    const Eigen::VectorXd y = g_new - r.grad;
    const double decrease = r.f - f_new;
    r.x = x_new;
    r.f = f_new;
    r.grad = g_new;
    r.trace.push_back(r.f);
    ++r.iterations;

    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (fresh) h *= sy / y.squaredNorm();
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd left = Eigen::MatrixXd::Identity(n, n) - rho * s * y.transpose();
      h = left * h * left.transpose() + rho * s * s.transpose();
      fresh = false;
    }
    if (decrease <= opts.f_rel_tol * (1.0 + std::abs(r.f))) {
      r.status = OptimStatus::success;
      return r;
    }
  }
}

Eigen::VectorXd finite_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                           const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& lower,
                                           const Eigen::VectorXd& upper, double step) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  double f0 = std::numeric_limits<double>::quiet_NaN();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = step * std::max(1.0, std::abs(x(i)));
    const bool room_up = x(i) + h <= upper(i);
    const bool room_down = x(i) - h >= lower(i);
    if (room_up && room_down) {
      probe(i) = x(i) + h;
      const double fp = f(probe);
      probe(i) = x(i) - h;
      const double fm = f(probe);
      g(i) = (fp - fm) / (2.0 * h);
    } else {
      if (std::isnan(f0)) f0 = f(x);
      const double sign = room_up ? 1.0 : -1.0;
      probe(i) = x(i) + sign * h;
      g(i) = sign * (f(probe) - f0) / h;
    }
    probe(i) = x(i);
  }
  return g;
}

}  // namespace fiberld
