#include "fiberld/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "fiberld/errors.hpp"
#include "fiberld/optimizer.hpp"
#include "fiberld/random.hpp"
#include "fiberld/special_functions.hpp"

namespace fiberld {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Coord { proportion, positive, location };

Coord coordinate_kind(Family family, Layout layout, int i) {
  if (layout == Layout::mixture) {
    if (i == 0) return Coord::proportion;
    --i;
  }
  const int dim = family == Family::ggamma ? 3 : 2;
  if (family == Family::lognorm && i % dim == 0) return Coord::location;
  return Coord::positive;
}

double to_theta_bound(Coord kind, double v) {
  switch (kind) {
    case Coord::proportion:
      if (v <= 0.0) return -kInf;
      if (v >= 1.0) return kInf;
      return logit(v);
    case Coord::positive:
      if (v <= 0.0) return -kInf;
      return std::log(v);
    case Coord::location:
      return v;
  }
  return v;
}

struct ThetaBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

ThetaBox theta_box(const ModelSpec& model, const FitConfig& cfg) {
  Eigen::VectorXd lo, hi;
  default_bounds(model.family, model.layout(), lo, hi);
  const int n = static_cast<int>(lo.size());
  if (cfg.lower) {
    if (cfg.lower->size() != n) throw DomainError("lower bounds have the wrong length");
    lo = *cfg.lower;
  }
  if (cfg.upper) {
    if (cfg.upper->size() != n) throw DomainError("upper bounds have the wrong length");
    hi = *cfg.upper;
  }
  ThetaBox box{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int i = 0; i < n; ++i) {
    if (!(lo(i) < hi(i))) {
      throw DomainError("lower bound must be below upper bound for parameter " +
                        parameter_names(model.family, model.layout())[i]);
    }
    const Coord kind = coordinate_kind(model.family, model.layout(), i);
    box.lower(i) = to_theta_bound(kind, lo(i));
    box.upper(i) = to_theta_bound(kind, hi(i));
  }
  return box;
}

std::vector<bool> fixed_of(const FitConfig& cfg, int n) {
  if (cfg.fixed_mask.empty()) return std::vector<bool>(n, false);
  if (static_cast<int>(cfg.fixed_mask.size()) != n) {
    throw DomainError("fixed mask has the wrong length");
  }
  const bool any = std::any_of(cfg.fixed_mask.begin(), cfg.fixed_mask.end(), [](bool b) { return b; });
  if (any && !cfg.par_start) throw DomainError("fixed parameters require starting values");
  return cfg.fixed_mask;
}

std::vector<int> free_indices(const std::vector<bool>& fixed) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(fixed.size()); ++i) {
    if (!fixed[i]) out.push_back(i);
  }
  return out;
}

Eigen::VectorXd gather(const Eigen::VectorXd& v, const std::vector<int>& idx) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(idx[i]);
  return out;
}

void scatter(Eigen::VectorXd& v, const std::vector<int>& idx, const Eigen::VectorXd& x) {
  for (std::size_t i = 0; i < idx.size(); ++i) v(idx[i]) = x(static_cast<Eigen::Index>(i));
}

// Objective wrapper: -loglik / n over the free coordinates.
Objective make_objective(const std::function<LikelihoodEvaluation(const ParamVector&, int)>& ll,
                         ParamVector base, std::vector<int> free, double n,
                         GradMode mode, ThetaBox box) {
  auto value_at = [=](const Eigen::VectorXd& x) {
    ParamVector theta = base;
    scatter(theta.values, free, x);
    try {
      const double v = -ll(theta, 0).loglik / n;
      return std::isfinite(v) ? v : kInf;
    } catch (const QuadratureError&) {
      return kInf;
    } catch (const DomainError&) {
      return kInf;
    }
  };
  const Eigen::VectorXd lo = gather(box.lower, free);
  const Eigen::VectorXd hi = gather(box.upper, free);
  return [=](const Eigen::VectorXd& x, Eigen::VectorXd* grad) -> double {
    if (!grad) return value_at(x);
    if (mode == GradMode::finite_difference) {
      const double v = value_at(x);
      if (!std::isfinite(v)) return kInf;
      *grad = finite_difference_gradient(value_at, x, lo, hi, 1e-5);
      return v;
    }
    ParamVector theta = base;
    scatter(theta.values, free, x);
    try {
      const auto e = ll(theta, 1);
      if (!std::isfinite(e.loglik)) return kInf;
      *grad = -gather(e.gradient, free) / n;
      return -e.loglik / n;
    } catch (const QuadratureError&) {
      return kInf;
    } catch (const DomainError&) {
      return kInf;
    }
  };
}

// Uncensored single-component likelihood, used to start microscopy fits.
LikelihoodEvaluation single_core_loglik(const ParamVector& theta, const Dataset& data,
                                        int order) {
  const Component c = decode_component(theta);
  const int p = c.dim();
  std::vector<double> ll(data.n());
  std::vector<double> g(order >= 1 ? data.n() * p : 0);
  for (std::size_t i = 0; i < data.n(); ++i) {
    const auto t = c.log_terms(data.values[i], order);
    ll[i] = t.log_f;
    if (order >= 1) {
      for (int j = 0; j < p; ++j) g[i * p + j] = t.score[j];
    }
  }
  LikelihoodEvaluation out;
  out.loglik = pairwise_sum(ll.data(), ll.size());
  if (order >= 1) {
    out.gradient.resize(p);
    for (int j = 0; j < p; ++j) out.gradient(j) = pairwise_sum(g.data() + j, data.n(), p);
  }
  return out;
}

ParamVector lognormal_split_start(const Dataset& data) {
  std::vector<double> logs(data.values.size());
  std::transform(data.values.begin(), data.values.end(), logs.begin(),
                 [](double v) { return std::log(v); });
  std::sort(logs.begin(), logs.end());
  const std::size_t n = logs.size();
  std::size_t cut = static_cast<std::size_t>(std::floor(0.2 * static_cast<double>(n)));
  cut = std::clamp<std::size_t>(cut, 1, n > 1 ? n - 1 : 1);
  auto moments = [&](std::size_t a, std::size_t b) {
    double mean = 0.0;
    for (std::size_t i = a; i < b; ++i) mean += logs[i];
    mean /= static_cast<double>(std::max<std::size_t>(b - a, 1));
    double var = 0.0;
    for (std::size_t i = a; i < b; ++i) var += (logs[i] - mean) * (logs[i] - mean);
    var /= static_cast<double>(std::max<std::size_t>(b - a, 1));
    return std::array<double, 2>{mean, std::max(std::sqrt(var), 0.05)};
  };
  const auto lower = moments(0, std::min(cut, n));
  const auto upper = n > 1 ? moments(cut, n) : lower;
  const double eps = std::clamp(static_cast<double>(cut) / static_cast<double>(n), 0.05, 0.95);
  return encode(MixtureParams{eps, Component(LognParams{lower[0], lower[1]}),
                              Component(LognParams{upper[0], upper[1]})});
}

ParamVector clamp_into(ParamVector theta, const ThetaBox& box) {
  theta.values = theta.values.cwiseMax(box.lower).cwiseMin(box.upper);
  return theta;
}

const char* status_name(OptimStatus s) {
  switch (s) {
    case OptimStatus::success:
      return "success";
    case OptimStatus::max_iter:
      return "max_iter";
    case OptimStatus::line_search_failure:
      return "line_search_failure";
  }
  return "unknown";
}

// Mean of log y for one component, used to tell fines from fibers.
double log_location(const Component& c) {
  if (c.family() == Family::ggamma) {
    const auto& p = c.ggd();
    return std::log(p.b) + special::digamma(p.k) / p.d;
  }
  return c.logn().mu;
}

// Mixture labels are interchangeable in the likelihood; fines are the
// component with the shorter lengths. Swaps the two blocks (eps -> 1 - eps)
// when the longer component came out first, provided the fixed mask is
// symmetric, eps is free and the swapped point stays inside the box.
bool canonicalize_labels(ParamVector& theta, const std::vector<bool>& fixed, const ThetaBox& box) {
  if (theta.layout != Layout::mixture) return false;
  const int dim = (theta.size() - 1) / 2;
  if (fixed[0]) return false;
  for (int i = 0; i < dim; ++i) {
    if (fixed[1 + i] != fixed[1 + dim + i]) return false;
  }
  if (log_location(decode_block(theta, 0)) <= log_location(decode_block(theta, 1))) return false;
  Eigen::VectorXd swapped = theta.values;
  swapped(0) = -theta.values(0);
  swapped.segment(1, dim) = theta.values.segment(1 + dim, dim);
  swapped.segment(1 + dim, dim) = theta.values.segment(1, dim);
  if ((swapped.array() < box.lower.array()).any() || (swapped.array() > box.upper.array()).any()) {
    return false;
  }
  theta.values = swapped;
  return true;
}

}  // namespace

const char* to_string(Convergence c) {
  switch (c) {
    case Convergence::success:
      return "success";
    case Convergence::max_iter:
      return "max_iter";
    case Convergence::line_search_failure:
      return "line_search_failure";
    case Convergence::singular_hessian:
      return "singular_hessian";
  }
  return "unknown";
}

void default_bounds(Family family, Layout layout, Eigen::VectorXd& lower, Eigen::VectorXd& upper) {
  const int n = parameter_count(family, layout);
  lower.resize(n);
  upper.resize(n);
  for (int i = 0; i < n; ++i) {
    const Coord kind = coordinate_kind(family, layout, i);
    const bool is_sigma = family == Family::lognorm && kind == Coord::positive;
    switch (kind) {
      case Coord::proportion:
        lower(i) = 1e-4;
        upper(i) = 1.0 - 1e-4;
        break;
      case Coord::location:
        lower(i) = -10.0;
        upper(i) = 10.0;
        break;
      case Coord::positive:
        lower(i) = is_sigma ? 1e-3 : 1e-4;
        upper(i) = is_sigma ? 10.0 : 50.0;
        break;
    }
  }
}

ParamVector default_ggd_start() {
  ParamVector p;
  p.family = Family::ggamma;
  p.layout = Layout::mixture;
  p.values.resize(7);
  p.values << 0.0, std::log(0.01), std::log(0.1), std::log(10.0), std::log(2.0), std::log(2.0),
      std::log(2.0);
  return p;
}

LikelihoodEvaluation model_loglik(const ParamVector& theta, const Dataset& data,
                                  const ModelSpec& model, const QuadratureConfig& cfg,
                                  int order) {
  return model.data_type == DataType::ofa ? ofa_loglik(theta, data, model.geom, cfg, order)
                                          : micro_loglik(theta, data, model.geom, cfg, order);
}

ParamVector initialize(const Dataset& data, const ModelSpec& model, const FitConfig& cfg,
                       bool* fell_back) {
  if (fell_back) *fell_back = false;
  const Layout layout = model.layout();
  const int n_par = parameter_count(model.family, layout);
  const auto fixed = fixed_of(cfg, n_par);
  if (cfg.par_start) {
    ParamVector p = from_original(model.family, layout, *cfg.par_start);
    p.fixed_mask = cfg.fixed_mask;
    return p;
  }
  data.validate_positive();
  const ThetaBox box = theta_box(model, cfg);
  const double n = static_cast<double>(data.n());

  ParamVector start;
  std::function<LikelihoodEvaluation(const ParamVector&, int)> ll;
  if (layout == Layout::mixture) {
    start = model.family == Family::ggamma ? default_ggd_start() : lognormal_split_start(data);
    ll = [&](const ParamVector& t, int order) { return init_loglik(t, data, order); };
  } else if (model.family == Family::lognorm) {
    double mean = 0.0;
    for (double v : data.values) mean += std::log(v);
    mean /= n;
    double var = 0.0;
    for (double v : data.values) var += (std::log(v) - mean) * (std::log(v) - mean);
    var /= n;
    return clamp_into(encode(Component(LognParams{mean, std::max(std::sqrt(var), 0.05)})), box);
  } else {
    start = encode(Component(GgdParams{2.0, 2.0, 2.0}));
    ll = [&](const ParamVector& t, int order) { return single_core_loglik(t, data, order); };
  }
  start = clamp_into(start, box);

  std::vector<int> all(static_cast<std::size_t>(n_par));
  for (int i = 0; i < n_par; ++i) all[i] = i;
  const Objective obj = make_objective(ll, start, all, n, GradMode::analytic, box);
  OptimizerOptions opts;
  opts.max_iter = cfg.max_iter;
  opts.grad_tol = cfg.grad_tol;
  try {
    const OptimResult r = minimize_box(obj, start.values, box.lower, box.upper, opts);
    if (std::isfinite(r.f)) {
      ParamVector out = start;
      out.values = r.x;
      return out;
    }
  } catch (const std::exception&) {
  }
  if (fell_back) *fell_back = true;
  return start;
}

FitResult fit(const Dataset& data, const ModelSpec& model, const FitConfig& cfg) {
  const Scale expected = model.data_type == DataType::ofa ? Scale::X : Scale::V;
  if (data.scale != expected) {
    throw DomainError(model.data_type == DataType::ofa ? "OFA fits need X-scale data"
                                                       : "microscopy fits need V-scale data");
  }
  data.validate(model.geom);
  cfg.quad.validate();
  if (cfg.n_starts < 1) throw DomainError("n_starts must be at least 1");
  if (cfg.max_iter < 0) throw DomainError("max_iter must be non-negative");

  const Layout layout = model.layout();
  const int n_par = parameter_count(model.family, layout);
  const auto fixed = fixed_of(cfg, n_par);
  const auto free = free_indices(fixed);
  const ThetaBox box = theta_box(model, cfg);
  const double n = static_cast<double>(data.n());

  FitResult result;
  result.model = model;
  result.n = data.n();

  ParamVector theta0 = initialize(data, model, cfg, &result.init_fallback);
  theta0.fixed_mask = fixed;
  {
    // Free coordinates start inside the box; fixed ones keep their values.
    const ParamVector clamped = clamp_into(theta0, box);
    scatter(theta0.values, free, gather(clamped.values, free));
  }

  auto ll = [&](const ParamVector& t, int order) {
    return model_loglik(t, data, model, cfg.quad, order);
  };
  const Objective obj = make_objective(ll, theta0, free, n, cfg.grad_mode, box);
  const Eigen::VectorXd lo = gather(box.lower, free);
  const Eigen::VectorXd hi = gather(box.upper, free);
  OptimizerOptions opts;
  opts.max_iter = cfg.max_iter;
  opts.grad_tol = cfg.grad_tol;

  std::optional<OptimResult> best;
  for (int s = 0; s < cfg.n_starts; ++s) {
    StartReport report;
    report.index = s;
    Eigen::VectorXd x0 = gather(theta0.values, free);
    if (s > 0) {
      Rng rng(cfg.seed + static_cast<std::uint64_t>(s));
      for (Eigen::Index i = 0; i < x0.size(); ++i) x0(i) += 0.5 * rng.normal();
      x0 = x0.cwiseMax(lo).cwiseMin(hi);
    }
    try {
      OptimResult r = minimize_box(obj, x0, lo, hi, opts);
      report.loglik = -r.f * n;
      report.iterations = r.iterations;
      report.ok = true;
      report.status = status_name(r.status);
      if (!best || r.f < best->f) {
        best = std::move(r);
        result.best_start = s;
      }
    } catch (const std::exception& e) {
      report.status = e.what();
    }
    result.starts.push_back(report);
    if (cfg.n_starts > 1 && free.empty()) break;
  }
  result.starts_tried = static_cast<int>(result.starts.size());
  if (!best) throw FitError("every optimizer start failed", result.starts);

  result.theta_hat = theta0;
  scatter(result.theta_hat.values, free, best->x);
  result.labels_swapped = canonicalize_labels(result.theta_hat, fixed, box);
  result.iterations = best->iterations;
  result.trace = best->trace;
  switch (best->status) {
    case OptimStatus::success:
      result.convergence = Convergence::success;
      break;
    case OptimStatus::max_iter:
      result.convergence = Convergence::max_iter;
      break;
    case OptimStatus::line_search_failure:
      result.convergence = Convergence::line_search_failure;
      break;
  }

  const LikelihoodEvaluation final_eval = ll(result.theta_hat, 2);
  result.loglik = final_eval.loglik;
  result.hessian = final_eval.hessian;
  result.theta_tilde_hat = to_original(result.theta_hat);

  result.cov_theta = inverse_negative_hessian(result.hessian, fixed);
  if (!result.has_covariance()) {
    result.convergence = Convergence::singular_hessian;
    return result;
  }
  result.se_theta = standard_errors(result.cov_theta);
  result.cov_tilde = delta_covariance(result.cov_theta, original_chain(result.theta_hat));
  result.se_tilde = standard_errors(result.cov_tilde);
  return result;
}

Eigen::MatrixXd covariance_original_scale(const FitResult& fit) {
  if (!fit.has_covariance()) throw DomainError("the fit has no covariance matrix");
  return delta_covariance(fit.cov_theta, original_chain(fit.theta_hat));
}

Eigen::MatrixXd inverse_negative_hessian(const Eigen::MatrixXd& hessian,
                                         const std::vector<bool>& fixed) {
  const Eigen::Index n = hessian.rows();
  std::vector<int> free;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (fixed.empty() || !fixed[i]) free.push_back(static_cast<int>(i));
  }
  const auto m = static_cast<Eigen::Index>(free.size());
  Eigen::MatrixXd a(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) a(i, j) = -0.5 * (hessian(free[i], free[j]) + hessian(free[j], free[i]));
  }
  if (!a.allFinite()) return {};
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n, n);
  if (m == 0) return full;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  const Eigen::VectorXd lambda = eig.eigenvalues();
  const double largest = lambda.cwiseAbs().maxCoeff();
  if (!(lambda.minCoeff() > 1e-12 * largest)) return {};
  const Eigen::MatrixXd inv =
      eig.eigenvectors() * lambda.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) full(free[i], free[j]) = 0.5 * (inv(i, j) + inv(j, i));
  }
  return full;
}

Eigen::MatrixXd delta_covariance(const Eigen::MatrixXd& cov, const Eigen::VectorXd& chain) {
  if (cov.rows() != chain.size() || cov.cols() != chain.size()) {
    throw DomainError("covariance and chain vector sizes differ");
  }
  return chain.asDiagonal() * cov * chain.asDiagonal();
}

Eigen::VectorXd standard_errors(const Eigen::MatrixXd& cov) {
  Eigen::VectorXd se(cov.rows());
  for (Eigen::Index i = 0; i < cov.rows(); ++i) {
    const double v = cov(i, i);
    se(i) = v < -1e-10 ? std::numeric_limits<double>::quiet_NaN() : std::sqrt(std::max(v, 0.0));
  }
  return se;
}

}  // namespace fiberld
