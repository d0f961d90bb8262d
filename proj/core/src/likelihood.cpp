#include "fiberld/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "fiberld/errors.hpp"
#include "fiberld/parallel.hpp"

namespace fiberld {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Distinct data values in increasing order with their multiplicities.
struct Grouped {
  std::vector<double> points;
  std::vector<double> counts;
  std::vector<std::size_t> group_of;
};

Grouped group_values(const std::vector<double>& values) {
  Grouped g;
  g.points = values;
  std::sort(g.points.begin(), g.points.end());
  g.points.erase(std::unique(g.points.begin(), g.points.end()), g.points.end());
  g.counts.assign(g.points.size(), 0.0);
  g.group_of.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto pos = static_cast<std::size_t>(
        std::lower_bound(g.points.begin(), g.points.end(), values[i]) - g.points.begin());
    g.group_of[i] = pos;
    g.counts[pos] += 1.0;
  }
  return g;
}

std::string list_indices(const std::vector<std::size_t>& idx) {
  std::ostringstream os;
  const std::size_t shown = std::min<std::size_t>(idx.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) os << (i ? ", " : "") << idx[i];
  if (idx.size() > shown) os << ", ... (" << idx.size() << " in total)";
  return os.str();
}

// A component density value on the log scale, with derivatives relative to
// the value itself: df/f and d2f/f.
struct RelativeTerms {
  double log_value = kNegInf;
  std::array<double, kMaxComponentDim> grad{};
  std::array<std::array<double, kMaxComponentDim>, kMaxComponentDim> hess{};
};

RelativeTerms relative_from_observed(const ObservedTerms& t) {
  RelativeTerms r;
  if (!(t.value > 0.0)) return r;
  r.log_value = std::log(t.value);
  for (int i = 0; i < kMaxComponentDim; ++i) {
    r.grad[i] = t.gradient[i] / t.value;
    for (int j = 0; j < kMaxComponentDim; ++j) r.hess[i][j] = t.hessian[i][j] / t.value;
  }
  return r;
}

RelativeTerms relative_from_core(const Component& c, double y, int order) {
  const auto t = c.log_terms(y, order);
  RelativeTerms r;
  r.log_value = t.log_f;
  for (int i = 0; i < kMaxComponentDim; ++i) {
    r.grad[i] = t.score[i];
    for (int j = 0; j < kMaxComponentDim; ++j) {
      r.hess[i][j] = t.score[i] * t.score[j] + t.dscore[i][j];
    }
  }
  return r;
}

// Per-group contributions stored densely so the reduction order is fixed.
struct Contributions {
  int dim;
  std::vector<double> loglik;
  std::vector<double> grad;  // groups x dim
  std::vector<double> hess;  // groups x dim x dim

  Contributions(std::size_t groups, int d, int order)
      : dim(d),
        loglik(groups, 0.0),
        grad(order >= 1 ? groups * d : 0, 0.0),
        hess(order >= 2 ? groups * d * d : 0, 0.0) {}
};

// log f_X of one point for the two-component mixture and, for order > 0,
// its derivatives with respect to (logit eps, fines..., fibers...).
void mixture_point(double eps, const RelativeTerms& fines, const RelativeTerms& fibers, int p,
                   int order, double weight, Contributions& out, std::size_t slot) {
  const int dim = 1 + 2 * p;
  const double log_a = eps > 0.0 ? std::log(eps) + fines.log_value : kNegInf;
  const double log_b = eps < 1.0 ? std::log1p(-eps) + fibers.log_value : kNegInf;
  const double top = std::max(log_a, log_b);
  if (top == kNegInf) {
    out.loglik[slot] = kNegInf;
    return;
  }
  const double lx = top + std::log(std::exp(log_a - top) + std::exp(log_b - top));
  out.loglik[slot] = weight * lx;
  if (order < 1) return;

  const double pi1 = std::exp(log_a - lx);
  const double pi2 = std::exp(log_b - lx);
  std::array<double, 1 + 2 * kMaxComponentDim> g{};
  g[0] = (1.0 - eps) * pi1 - eps * pi2;
  for (int i = 0; i < p; ++i) {
    g[1 + i] = pi1 * fines.grad[i];
    g[1 + p + i] = pi2 * fibers.grad[i];
  }
  double* grow = &out.grad[slot * dim];
  for (int i = 0; i < dim; ++i) grow[i] = weight * g[i];
  if (order < 2) return;

  std::array<std::array<double, 1 + 2 * kMaxComponentDim>, 1 + 2 * kMaxComponentDim> h{};
  h[0][0] = (1.0 - 2.0 * eps) * g[0];
  for (int i = 0; i < p; ++i) {
    h[0][1 + i] = h[1 + i][0] = (1.0 - eps) * pi1 * fines.grad[i];
    h[0][1 + p + i] = h[1 + p + i][0] = -eps * pi2 * fibers.grad[i];
    for (int j = 0; j < p; ++j) {
      h[1 + i][1 + j] = pi1 * fines.hess[i][j];
      h[1 + p + i][1 + p + j] = pi2 * fibers.hess[i][j];
    }
  }
  double* hrow = &out.hess[slot * dim * dim];
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) hrow[i * dim + j] = weight * (h[i][j] - g[i] * g[j]);
  }
}

LikelihoodEvaluation reduce(const Contributions& c, const Grouped& groups, int order) {
  LikelihoodEvaluation out;
  const std::size_t m = groups.points.size();
  const int dim = c.dim;
  out.loglik = pairwise_sum(c.loglik.data(), m);
  if (order >= 1) {
    out.gradient.resize(dim);
    for (int i = 0; i < dim; ++i) out.gradient(i) = pairwise_sum(c.grad.data() + i, m, dim);
  }
  if (order >= 2) {
    out.hessian.resize(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = i; j < dim; ++j) {
        const double v = pairwise_sum(c.hess.data() + i * dim + j, m, dim * dim);
        out.hessian(i, j) = v;
        out.hessian(j, i) = v;
      }
    }
  }
  out.per_point_loglik.resize(groups.group_of.size());
  for (std::size_t i = 0; i < groups.group_of.size(); ++i) {
    const std::size_t gidx = groups.group_of[i];
    out.per_point_loglik[i] = c.loglik[gidx] / groups.counts[gidx];
  }
  return out;
}

void check_theta(const ParamVector& theta, Layout layout) {
  if (theta.layout != layout) {
    throw DomainError(layout == Layout::mixture
                          ? "this likelihood needs a two-component parameter vector"
                          : "this likelihood needs a single-component parameter vector");
  }
  if (theta.size() != parameter_count(theta.family, layout)) {
    throw DomainError("parameter vector has the wrong length for its family");
  }
  for (int i = 0; i < theta.size(); ++i) {
    if (!std::isfinite(theta.values(i))) throw DomainError("parameter vector is not finite");
  }
}

void check_scale(const Dataset& data, Scale expected) {
  if (data.scale != expected) {
    throw DomainError(expected == Scale::X ? "OFA likelihood needs X-scale data"
                                           : "microscopy likelihood needs V-scale data");
  }
}

LikelihoodEvaluation ofa_impl(double eps, const Component& fines, const Component& fibers,
                              const Dataset& data, const CoreGeometry& geom,
                              const QuadratureConfig& cfg, int order) {
  const Grouped groups = group_values(data.values);
  const int p = fines.dim();
  const auto t1 = eps > 0.0 ? observed_terms(fines, groups.points, geom, cfg, order)
                            : std::vector<ObservedTerms>(groups.points.size());
  const auto t2 = eps < 1.0 ? observed_terms(fibers, groups.points, geom, cfg, order)
                            : std::vector<ObservedTerms>(groups.points.size());
  Contributions c(groups.points.size(), 1 + 2 * p, order);
  for (std::size_t j = 0; j < groups.points.size(); ++j) {
    mixture_point(eps, relative_from_observed(t1[j]), relative_from_observed(t2[j]), p, order,
                  groups.counts[j], c, j);
  }
  return reduce(c, groups, order);
}

}  // namespace

double pairwise_sum(const double* values, std::size_t n, std::size_t stride) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += values[i * stride];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values, half, stride) + pairwise_sum(values + half * stride, n - half, stride);
}

void Dataset::validate(const CoreGeometry& geom) const {
  if (values.empty()) throw DataError("dataset is empty", {});
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0 && values[i] < geom.diameter())) bad.push_back(i);
  }
  if (!bad.empty()) {
    std::ostringstream os;
    os << "observed lengths must lie strictly inside (0, 2r) = (0, " << geom.diameter()
       << "); offending zero-based indices: " << list_indices(bad);
    throw DataError(os.str(), bad);
  }
}

void Dataset::validate_positive() const {
  if (values.empty()) throw DataError("dataset is empty", {});
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0 && std::isfinite(values[i]))) bad.push_back(i);
  }
  if (!bad.empty()) {
    throw DataError("lengths must be positive and finite; offending zero-based indices: " +
                        list_indices(bad),
                    bad);
  }
}

LikelihoodEvaluation ofa_loglik(const ParamVector& theta, const Dataset& data,
                                const CoreGeometry& geom, const QuadratureConfig& cfg,
                                int order) {
  check_theta(theta, Layout::mixture);
  check_scale(data, Scale::X);
  data.validate(geom);
  const MixtureParams mp = decode_mixture(theta);
  return ofa_impl(mp.eps, mp.fines, mp.fibers, data, geom, cfg, order);
}

double ofa_loglik_value(const MixtureParams& mp, const Dataset& data, const CoreGeometry& geom,
                        const QuadratureConfig& cfg) {
  mp.validate();
  check_scale(data, Scale::X);
  data.validate(geom);
  return ofa_impl(mp.eps, mp.fines, mp.fibers, data, geom, cfg, 0).loglik;
}

LikelihoodEvaluation init_loglik(const ParamVector& theta, const Dataset& data, int order) {
  check_theta(theta, Layout::mixture);
  data.validate_positive();
  const MixtureParams mp = decode_mixture(theta);
  const Grouped groups = group_values(data.values);
  const int p = mp.fines.dim();
  Contributions c(groups.points.size(), 1 + 2 * p, order);
  parallel_for(groups.points.size(), [&](std::size_t j) {
    const double y = groups.points[j];
    mixture_point(mp.eps, relative_from_core(mp.fines, y, order),
                  relative_from_core(mp.fibers, y, order), p, order, groups.counts[j], c, j);
  });
  return reduce(c, groups, order);
}

LikelihoodEvaluation micro_loglik(const ParamVector& theta, const Dataset& data,
                                  const CoreGeometry& geom, const QuadratureConfig& cfg,
                                  int order) {
  check_theta(theta, Layout::single);
  check_scale(data, Scale::V);
  data.validate(geom);
  const Component c = decode_component(theta);
  const int p = c.dim();
  const UncutMass k = uncut_mass(c, geom, cfg, order);
  if (!(k.value > 0.0)) {
    throw QuadratureError("uncut fiber mass k is not positive for these parameters", 0.0);
  }
  const double log_k = std::log(k.value);
  std::array<double, kMaxComponentDim> dk{};
  std::array<std::array<double, kMaxComponentDim>, kMaxComponentDim> d2k{};
  for (int i = 0; i < p; ++i) dk[i] = k.gradient[i] / k.value;
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) d2k[i][j] = k.hessian[i][j] / k.value - dk[i] * dk[j];
  }

  const Grouped groups = group_values(data.values);
  Contributions out(groups.points.size(), p, order);
  parallel_for(groups.points.size(), [&](std::size_t j) {
    const double v = groups.points[j];
    const double w = groups.counts[j];
    const auto t = c.log_terms(v, order);
    out.loglik[j] = w * (t.log_f + std::log(prob_uncut(v, geom)) - log_k);
    if (order >= 1) {
      for (int i = 0; i < p; ++i) out.grad[j * p + i] = w * (t.score[i] - dk[i]);
    }
    if (order >= 2) {
      for (int i = 0; i < p; ++i) {
        for (int l = 0; l < p; ++l) {
          out.hess[(j * p + i) * p + l] = w * (t.dscore[i][l] - d2k[i][l]);
        }
      }
    }
  });
  return reduce(out, groups, order);
}

}  // namespace fiberld
