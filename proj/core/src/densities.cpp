#include "fiberld/densities.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fiberld/errors.hpp"
#include "fiberld/special_functions.hpp"

namespace fiberld {
namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

void validate(const GgdParams& p) {
  if (!positive_finite(p.b) || !positive_finite(p.d) || !positive_finite(p.k)) {
    throw DomainError("generalized gamma parameters must be positive and finite (b=" +
                      std::to_string(p.b) + ", d=" + std::to_string(p.d) +
                      ", k=" + std::to_string(p.k) + ")");
  }
}

void validate(const LognParams& p) {
  if (!std::isfinite(p.mu) || !positive_finite(p.sigma)) {
    throw DomainError("lognormal parameters require finite mu and positive sigma (mu=" +
                      std::to_string(p.mu) + ", sigma=" + std::to_string(p.sigma) + ")");
  }
}

}  // namespace

double logistic(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double logit(double p) { return std::log(p) - std::log1p(-p); }

// ---------------------------------------------------------------------------

Component::Component(GgdParams p) : family_(Family::ggamma), params_(p) {
  validate(p);
  log_norm_ = std::log(p.d) - special::log_gamma(p.k);
  psi_ = special::digamma(p.k);
  psi1_ = special::trigamma(p.k);
}

Component::Component(LognParams p) : family_(Family::lognorm), params_(p) {
  validate(p);
  log_norm_ = -std::log(p.sigma) - kHalfLog2Pi;
}

double Component::log_pdf(double y) const {
  if (std::isnan(y) || y < 0.0) {
    throw DomainError("density evaluated at negative length " + std::to_string(y));
  }
  if (family_ == Family::ggamma) {
    const auto& p = ggd();
    if (y == 0.0) {
      const double dk = p.d * p.k;
      if (dk > 1.0) return -std::numeric_limits<double>::infinity();
      if (dk < 1.0) return std::numeric_limits<double>::infinity();
      return log_norm_ - std::log(p.b);
    }
    const double z = std::log(y) - std::log(p.b);
    return log_norm_ + p.d * p.k * z - std::log(y) - std::exp(p.d * z);
  }
  if (y == 0.0) {
    throw DomainError("lognormal density requires y > 0");
  }
  const auto& p = logn();
  const double q = (std::log(y) - p.mu) / p.sigma;
  return log_norm_ - std::log(y) - 0.5 * q * q;
}

double Component::pdf(double y) const { return std::exp(log_pdf(y)); }

LogDensityTerms Component::log_terms(double y, int order) const {
  LogDensityTerms t;
  const double ly = std::log(y);
  if (family_ == Family::ggamma) {
    const auto& p = ggd();
    const double z = ly - std::log(p.b);
    const double dz = p.d * z;
    const double c1 = std::exp(dz);
    t.log_f = log_norm_ + p.k * dz - ly - c1;
    if (order < 1) return t;
    const double d = p.d;
    const double k = p.k;
    t.score = {d * (c1 - k), 1.0 + dz * (k - c1), k * (dz - psi_)};
    if (order < 2) return t;
    auto& h = t.dscore;
    h[0][0] = -d * d * c1;
    h[0][1] = d * (c1 - k + dz * c1);
    h[0][2] = -d * k;
    h[1][1] = dz * (k - c1 - dz * c1);
    h[1][2] = dz * k;
    h[2][2] = k * (dz - psi_) - k * k * psi1_;
    h[1][0] = h[0][1];
    h[2][0] = h[0][2];
    h[2][1] = h[1][2];
    return t;
  }
  const auto& p = logn();
  const double q = (ly - p.mu) / p.sigma;
  t.log_f = log_norm_ - ly - 0.5 * q * q;
  if (order < 1) return t;
  t.score = {q / p.sigma, q * q - 1.0, 0.0};
  if (order < 2) return t;
  auto& h = t.dscore;
  h[0][0] = -1.0 / (p.sigma * p.sigma);
  h[0][1] = h[1][0] = -2.0 * q / p.sigma;
  h[1][1] = -2.0 * q * q;
  return t;
}

std::array<double, kMaxComponentDim> Component::theta() const {
  if (family_ == Family::ggamma) {
    const auto& p = ggd();
    return {std::log(p.b), std::log(p.d), std::log(p.k)};
  }
  const auto& p = logn();
  return {p.mu, std::log(p.sigma), 0.0};
}

Component Component::from_theta(Family family, std::span<const double> theta) {
  if (family == Family::ggamma) {
    if (theta.size() < 3) throw DomainError("generalized gamma needs 3 coordinates");
    return Component(GgdParams{std::exp(theta[0]), std::exp(theta[1]), std::exp(theta[2])});
  }
  if (theta.size() < 2) throw DomainError("lognormal needs 2 coordinates");
  return Component(LognParams{theta[0], std::exp(theta[1])});
}

std::array<double, kMaxComponentDim> Component::original() const {
  if (family_ == Family::ggamma) {
    const auto& p = ggd();
    return {p.b, p.d, p.k};
  }
  return {logn().mu, logn().sigma, 0.0};
}

std::array<double, kMaxComponentDim> Component::original_chain() const {
  if (family_ == Family::ggamma) return original();
  return {1.0, logn().sigma, 0.0};
}

double Component::log_mode(int power) const {
  if (family_ == Family::ggamma) {
    const auto& p = ggd();
    return std::log(p.b) + std::log(p.k + power / p.d) / p.d;
  }
  const auto& p = logn();
  return p.mu + power * p.sigma * p.sigma;
}

void MixtureParams::validate() const {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw DomainError("mixture proportion must lie in [0, 1], got " + std::to_string(eps));
  }
  if (fines.family() != fibers.family()) {
    throw DomainError("fines and fibers must belong to the same family");
  }
}

// ---------------------------------------------------------------------------

double ggd_pdf(double y, const GgdParams& p) { return Component(p).pdf(y); }

double logn_pdf(double y, const LognParams& p) {
  if (!(y > 0.0)) throw DomainError("lognormal density requires y > 0");
  return Component(p).pdf(y);
}

namespace {

template <int N>
Eigen::Matrix<double, N, 1> grad_from_terms(const Component& c, double y) {
  Eigen::Matrix<double, N, 1> g = Eigen::Matrix<double, N, 1>::Zero();
  if (!(y > 0.0)) return g;
  const auto t = c.log_terms(y, 1);
  const double f = std::exp(t.log_f);
  for (int i = 0; i < N; ++i) g(i) = f * t.score[i];
  return g;
}

template <int N>
Eigen::Matrix<double, N, N> hess_from_terms(const Component& c, double y) {
  Eigen::Matrix<double, N, N> h = Eigen::Matrix<double, N, N>::Zero();
  if (!(y > 0.0)) return h;
  const auto t = c.log_terms(y, 2);
  const double f = std::exp(t.log_f);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) h(i, j) = f * (t.score[i] * t.score[j] + t.dscore[i][j]);
  }
  return h;
}

void require_nonnegative(double y) {
  if (std::isnan(y) || y < 0.0) throw DomainError("negative length " + std::to_string(y));
}

void require_positive(double y) {
  if (!(y > 0.0)) throw DomainError("lognormal density requires y > 0");
}

}  // namespace

Eigen::Vector3d ggd_grad_theta(double y, const GgdParams& p) {
  require_nonnegative(y);
  return grad_from_terms<3>(Component(p), y);
}

Eigen::Vector2d logn_grad_theta(double y, const LognParams& p) {
  require_positive(y);
  return grad_from_terms<2>(Component(p), y);
}

Eigen::Matrix3d ggd_hess_theta(double y, const GgdParams& p) {
  require_nonnegative(y);
  return hess_from_terms<3>(Component(p), y);
}

Eigen::Matrix2d logn_hess_theta(double y, const LognParams& p) {
  require_positive(y);
  return hess_from_terms<2>(Component(p), y);
}

// ---------------------------------------------------------------------------

int parameter_count(Family family, Layout layout) {
  const int dim = family == Family::ggamma ? 3 : 2;
  return layout == Layout::mixture ? 1 + 2 * dim : dim;
}

std::vector<std::string> parameter_names(Family family, Layout layout) {
  const std::vector<std::string> ggd = {"b", "d", "k"};
  const std::vector<std::string> logn = {"mu", "sig"};
  const auto& base = family == Family::ggamma ? ggd : logn;
  std::vector<std::string> names;
  if (layout == Layout::mixture) {
    names.push_back("eps");
    for (const auto& n : base) names.push_back(n + "_fines");
  }
  for (const auto& n : base) names.push_back(n + "_fibers");
  return names;
}

ParamVector encode(const MixtureParams& p) {
  p.validate();
  if (p.eps <= 0.0 || p.eps >= 1.0) {
    throw DomainError(
        "eps on the boundary {0, 1} has no optimizer-scale encoding; "
        "fit a single component or fix the proportion instead");
  }
  const int dim = p.fines.dim();
  ParamVector v;
  v.family = p.family();
  v.layout = Layout::mixture;
  v.values.resize(1 + 2 * dim);
  v.values(0) = logit(p.eps);
  const auto tf = p.fines.theta();
  const auto tb = p.fibers.theta();
  for (int i = 0; i < dim; ++i) {
    v.values(1 + i) = tf[i];
    v.values(1 + dim + i) = tb[i];
  }
  return v;
}

ParamVector encode(const Component& c) {
  ParamVector v;
  v.family = c.family();
  v.layout = Layout::single;
  v.values.resize(c.dim());
  const auto t = c.theta();
  for (int i = 0; i < c.dim(); ++i) v.values(i) = t[i];
  return v;
}

namespace {

void check_shape(const ParamVector& theta) {
  if (theta.size() != parameter_count(theta.family, theta.layout)) {
    throw DomainError("parameter vector has " + std::to_string(theta.size()) +
                      " coordinates, expected " +
                      std::to_string(parameter_count(theta.family, theta.layout)));
  }
  if (!theta.fixed_mask.empty() &&
      static_cast<int>(theta.fixed_mask.size()) != theta.size()) {
    throw DomainError("fixed mask length does not match parameter vector");
  }
  for (int i = 0; i < theta.size(); ++i) {
    if (!std::isfinite(theta.values(i))) {
      throw DomainError("parameter vector has a non-finite coordinate at index " +
                        std::to_string(i));
    }
  }
}

}  // namespace

Component decode_block(const ParamVector& theta, int block) {
  check_shape(theta);
  const int dim = theta.family == Family::ggamma ? 3 : 2;
  const int offset = theta.layout == Layout::mixture ? 1 + block * dim : 0;
  return Component::from_theta(
      theta.family, std::span<const double>(theta.values.data() + offset, dim));
}

MixtureParams decode_mixture(const ParamVector& theta) {
  if (theta.layout != Layout::mixture) throw DomainError("expected a mixture parameter vector");
  return MixtureParams{logistic(theta.values(0)), decode_block(theta, 0), decode_block(theta, 1)};
}

Component decode_component(const ParamVector& theta) {
  if (theta.layout != Layout::single) {
    throw DomainError("expected a single-component parameter vector");
  }
  return decode_block(theta, 0);
}

Eigen::VectorXd to_original(const ParamVector& theta) {
  check_shape(theta);
  const int dim = theta.family == Family::ggamma ? 3 : 2;
  Eigen::VectorXd out(theta.size());
  int pos = 0;
  int blocks = 1;
  if (theta.layout == Layout::mixture) {
    out(pos++) = logistic(theta.values(0));
    blocks = 2;
  }
  for (int b = 0; b < blocks; ++b) {
    const auto orig = decode_block(theta, b).original();
    for (int i = 0; i < dim; ++i) out(pos++) = orig[i];
  }
  return out;
}

ParamVector from_original(Family family, Layout layout, const Eigen::VectorXd& original) {
  const int n = parameter_count(family, layout);
  if (original.size() != n) {
    throw DomainError("expected " + std::to_string(n) + " original-scale parameters, got " +
                      std::to_string(original.size()));
  }
  auto make = [&](int offset) -> Component {
    if (family == Family::ggamma) {
      return Component(GgdParams{original(offset), original(offset + 1), original(offset + 2)});
    }
    return Component(LognParams{original(offset), original(offset + 1)});
  };
  if (layout == Layout::single) return encode(make(0));
  const int dim = family == Family::ggamma ? 3 : 2;
  return encode(MixtureParams{original(0), make(1), make(1 + dim)});
}

Eigen::VectorXd original_chain(const ParamVector& theta) {
  check_shape(theta);
  const int dim = theta.family == Family::ggamma ? 3 : 2;
  Eigen::VectorXd out(theta.size());
  int pos = 0;
  int blocks = 1;
  if (theta.layout == Layout::mixture) {
    const double eps = logistic(theta.values(0));
    out(pos++) = eps - eps * eps;
    blocks = 2;
  }
  for (int b = 0; b < blocks; ++b) {
    const auto chain = decode_block(theta, b).original_chain();
    for (int i = 0; i < dim; ++i) out(pos++) = chain[i];
  }
  return out;
}

}  // namespace fiberld
