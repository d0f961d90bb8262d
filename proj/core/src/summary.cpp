#include "fiberld/summary.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fiberld/errors.hpp"
#include "fiberld/scales.hpp"

namespace fiberld {
namespace {

constexpr double kPi = std::numbers::pi;

struct MomentGradients {
  double mean;
  std::array<double, 5> raw{};  // E(W^m), m = 0..4 (index 0 unused)
  std::array<double, kMaxComponentDim> d_mean{};
  std::array<std::array<double, kMaxComponentDim>, 5> d_raw{};
};

MomentGradients w_moments(const Component& c, const CoreGeometry& geom,
                          const QuadratureConfig& cfg, bool with_gradient) {
  const auto wm = weighted_moments(c, geom, cfg, with_gradient);
  const double pr = kPi * geom.radius();
  MomentGradients out{};
  const double i0 = wm.value[0];
  out.mean = 0.5 / i0 - 0.5 * pr;
  const double scale = pr + 2.0 * out.mean;
  for (int m = 1; m <= 4; ++m) out.raw[m] = scale * wm.value[m];
  out.raw[1] = out.mean;
  if (!with_gradient) return out;
  for (int j = 0; j < kMaxComponentDim; ++j) {
    out.d_mean[j] = -0.5 * wm.gradient[0][j] / (i0 * i0);
    for (int m = 1; m <= 4; ++m) {
      out.d_raw[m][j] = 2.0 * wm.value[m] * out.d_mean[j] + scale * wm.gradient[m][j];
    }
    out.d_raw[1][j] = out.d_mean[j];
  }
  return out;
}

Statistic make_statistic(double value, const Eigen::VectorXd& gradient,
                         const FitResult& fit) {
  Statistic s;
  s.value = value;
  s.gradient = gradient;
  if (fit.has_covariance()) {
    const double var = gradient.dot(fit.cov_theta * gradient);
    s.se = var < -1e-10 ? std::numeric_limits<double>::quiet_NaN() : std::sqrt(std::max(var, 0.0));
  } else {
    s.se = std::numeric_limits<double>::quiet_NaN();
  }
  return s;
}

ComponentSummary component_summary(const FitResult& fit, int block,
                                   const QuadratureConfig& cfg) {
  const Component c = decode_block(fit.theta_hat, block);
  const WStatistics w = w_statistics(c, fit.model.geom, cfg, true);
  const int p = c.dim();
  const int offset = fit.theta_hat.layout == Layout::mixture ? 1 + block * p : 0;
  std::array<Statistic, 4> stats;
  for (int s = 0; s < 4; ++s) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(fit.theta_hat.size());
    for (int j = 0; j < p; ++j) {
      if (!fit.theta_hat.is_fixed(offset + j)) g(offset + j) = w.gradient[s][j];
    }
    stats[s] = make_statistic(w.value[s], g, fit);
  }
  return {stats[0], stats[1], stats[2], stats[3]};
}

}  // namespace

WStatistics w_statistics(const Component& c, const CoreGeometry& geom,
                         const QuadratureConfig& cfg, bool with_gradient) {
  const MomentGradients m = w_moments(c, geom, cfg, with_gradient);
  const double mu = m.mean;
  const double e2 = m.raw[2];
  const double e3 = m.raw[3];
  const double e4 = m.raw[4];
  const double var = e2 - mu * mu;
  if (!(var > 0.0)) throw QuadratureError("W-scale variance is not positive", var);
  const double sd = std::sqrt(var);
  const double n3 = e3 - 3.0 * mu * e2 + 2.0 * mu * mu * mu;
  const double n4 = e4 - 4.0 * mu * e3 + 6.0 * mu * mu * e2 - 3.0 * mu * mu * mu * mu;

  WStatistics out;
  out.value = {mu, sd, n3 / (var * sd), n4 / (var * var)};
  if (!with_gradient) return out;
  for (int j = 0; j < c.dim(); ++j) {
    const double dmu = m.d_mean[j];
    const double de2 = m.d_raw[2][j];
    const double de3 = m.d_raw[3][j];
    const double de4 = m.d_raw[4][j];
    const double dvar = de2 - 2.0 * mu * dmu;
    const double dn3 = de3 - 3.0 * e2 * dmu - 3.0 * mu * de2 + 6.0 * mu * mu * dmu;
    const double dn4 = de4 - 4.0 * e3 * dmu - 4.0 * mu * de3 + 12.0 * mu * e2 * dmu +
                       6.0 * mu * mu * de2 - 12.0 * mu * mu * mu * dmu;
    out.gradient[0][j] = dmu;
    out.gradient[1][j] = 0.5 * dvar / sd;
    out.gradient[2][j] = dn3 / (var * sd) - 1.5 * n3 * dvar / (var * var * sd);
    out.gradient[3][j] = dn4 / (var * var) - 2.0 * n4 * dvar / (var * var * var);
  }
  return out;
}

TreeStatistics tree_statistics(const ParamVector& theta, const CoreGeometry& geom,
                               const QuadratureConfig& cfg) {
  const MixtureParams mp = decode_mixture(theta);
  const int p = mp.fines.dim();
  const MomentGradients mf = w_moments(mp.fines, geom, cfg, true);
  const MomentGradients mb = w_moments(mp.fibers, geom, cfg, true);
  const double eps = mp.eps;
  const double pr = kPi * geom.radius();
  const double uf = mf.mean;
  const double ub = mb.mean;

  const double num = 2.0 * uf * ub + eps * pr * uf + (1.0 - eps) * pr * ub;
  const double den = 2.0 * (eps * ub + (1.0 - eps) * uf) + pr;
  const double ew = num / den;
  auto quotient = [&](double dnum, double dden) { return (dnum * den - num * dden) / (den * den); };
  const double ew_eps = quotient(pr * (uf - ub), 2.0 * (ub - uf));
  const double ew_uf = quotient(2.0 * ub + eps * pr, 2.0 * (1.0 - eps));
  const double ew_ub = quotient(2.0 * uf + (1.0 - eps) * pr, 2.0 * eps);

  const double base = pr + 2.0 * uf;
  const double et = eps * (pr + 2.0 * ew) / base;
  const double et_eps = (pr + 2.0 * ew) / base + 2.0 * eps * ew_eps / base;
  const double et_uf = 2.0 * eps / base * (ew_uf - (pr + 2.0 * ew) / base);
  const double et_ub = 2.0 * eps * ew_ub / base;

  TreeStatistics out;
  out.eps_tilde = et;
  out.mean_w = ew;
  out.grad_eps_tilde = Eigen::VectorXd::Zero(theta.size());
  out.grad_mean_w = Eigen::VectorXd::Zero(theta.size());
  const double deps = eps * (1.0 - eps);
  out.grad_eps_tilde(0) = et_eps * deps;
  out.grad_mean_w(0) = ew_eps * deps;
  for (int j = 0; j < p; ++j) {
    out.grad_eps_tilde(1 + j) = et_uf * mf.d_mean[j];
    out.grad_eps_tilde(1 + p + j) = et_ub * mb.d_mean[j];
    out.grad_mean_w(1 + j) = ew_uf * mf.d_mean[j];
    out.grad_mean_w(1 + p + j) = ew_ub * mb.d_mean[j];
  }
  return out;
}

SummaryStats summary_stats(const FitResult& fit, const QuadratureConfig& cfg) {
  SummaryStats out;
  out.loglik = fit.loglik;
  out.n = fit.n;
  out.convergence = fit.convergence;
  out.ses_available = fit.has_covariance();
  if (fit.theta_hat.layout == Layout::mixture) {
    out.fines = component_summary(fit, 0, cfg);
    out.fibers = component_summary(fit, 1, cfg);
    TreeStatistics t = tree_statistics(fit.theta_hat, fit.model.geom, cfg);
    for (int i = 0; i < fit.theta_hat.size(); ++i) {
      if (fit.theta_hat.is_fixed(i)) {
        t.grad_eps_tilde(i) = 0.0;
        t.grad_mean_w(i) = 0.0;
      }
    }
    out.eps_tilde = make_statistic(t.eps_tilde, t.grad_eps_tilde, fit);
    out.mean_w_overall = make_statistic(t.mean_w, t.grad_mean_w, fit);
  } else {
    out.fibers = component_summary(fit, 0, cfg);
  }
  return out;
}

SummaryStats summary_ses(const FitResult& fit, const QuadratureConfig& cfg) {
  if (!fit.has_covariance()) {
    throw DomainError("standard errors need a fit with a covariance matrix");
  }
  return summary_stats(fit, cfg);
}

}  // namespace fiberld
