#pragma once

#include <array>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace fiberld {

enum class Family { ggamma, lognorm };

/// Generalized gamma: f(y) = d b^{-dk} y^{dk-1} exp{-(y/b)^d} / Gamma(k).
struct GgdParams {
  double b;  ///< scale, mm
  double d;  ///< power
  double k;  ///< shape
};

/// Lognormal on the log-length scale.
struct LognParams {
  double mu;
  double sigma;
};

inline constexpr int kMaxComponentDim = 3;

/// ln f(y) together with its first and second derivatives with respect to the
/// optimizer-scale coordinates of one component: (log b, log d, log k) for the
/// generalized gamma, (mu, log sigma) for the lognormal. Only the leading
/// dim() x dim() block is meaningful.
struct LogDensityTerms {
  double log_f = 0.0;
  std::array<double, kMaxComponentDim> score{};
  std::array<std::array<double, kMaxComponentDim>, kMaxComponentDim> dscore{};
};

/// One parametric length distribution on the core (Y) scale.
class Component {
 public:
  explicit Component(GgdParams p);
  explicit Component(LognParams p);

  Family family() const noexcept { return family_; }
  int dim() const noexcept { return family_ == Family::ggamma ? 3 : 2; }

  const GgdParams& ggd() const { return std::get<GgdParams>(params_); }
  const LognParams& logn() const { return std::get<LognParams>(params_); }

  double pdf(double y) const;
  double log_pdf(double y) const;

  /// order 0: log_f only; 1: adds score; 2: adds dscore. Requires y > 0.
  LogDensityTerms log_terms(double y, int order) const;

  /// Optimizer-scale coordinates.
  std::array<double, kMaxComponentDim> theta() const;
  static Component from_theta(Family family, std::span<const double> theta);

  /// (b, d, k) or (mu, sigma).
  std::array<double, kMaxComponentDim> original() const;
  /// d original / d theta, coordinate-wise.
  std::array<double, kMaxComponentDim> original_chain() const;

  /// log y at which y^{power+1} f(y) peaks. Both families are log-concave in
  /// log y, so this is the unique mode of the integrand in log space.
  double log_mode(int power) const;

 private:
  Family family_;
  std::variant<GgdParams, LognParams> params_;
  double log_norm_ = 0.0;
  double psi_ = 0.0;   // digamma(k)
  double psi1_ = 0.0;  // trigamma(k)
};

/// Two-component mixture on the core scale; eps is the fines proportion.
struct MixtureParams {
  double eps;
  Component fines;
  Component fibers;

  /// Throws DomainError unless 0 <= eps <= 1 and both families agree.
  void validate() const;
  Family family() const { return fines.family(); }
};

double ggd_pdf(double y, const GgdParams& p);
double logn_pdf(double y, const LognParams& p);

Eigen::Vector3d ggd_grad_theta(double y, const GgdParams& p);
Eigen::Vector2d logn_grad_theta(double y, const LognParams& p);
Eigen::Matrix3d ggd_hess_theta(double y, const GgdParams& p);
Eigen::Matrix2d logn_hess_theta(double y, const LognParams& p);

// ---------------------------------------------------------------------------
// Optimizer-scale parameter vectors.
//
// Mixture layout:  (logit eps, fines..., fibers...)
// Single layout:   (component...)   [microscopy, fibers only]

enum class Layout { mixture, single };

struct ParamVector {
  Family family = Family::ggamma;
  Layout layout = Layout::mixture;
  Eigen::VectorXd values;
  /// Empty means nothing fixed; otherwise one entry per coordinate.
  std::vector<bool> fixed_mask;

  int size() const { return static_cast<int>(values.size()); }
  bool is_fixed(int i) const { return !fixed_mask.empty() && fixed_mask[i]; }
};

int parameter_count(Family family, Layout layout);
/// Names in print order, e.g. eps, b_fines, d_fines, ... ; sig_* for sigma.
std::vector<std::string> parameter_names(Family family, Layout layout);

ParamVector encode(const MixtureParams& p);
ParamVector encode(const Component& c);
MixtureParams decode_mixture(const ParamVector& theta);
Component decode_component(const ParamVector& theta);
/// Fines or fibers block of a mixture vector (or the whole single vector).
Component decode_block(const ParamVector& theta, int block);

/// Original-scale values in print order (eps first for mixtures).
Eigen::VectorXd to_original(const ParamVector& theta);
ParamVector from_original(Family family, Layout layout, const Eigen::VectorXd& original);
/// Diagonal of d(original)/d(theta): (eps - eps^2, b, d, k, ...) or
/// (eps - eps^2, 1, sigma, 1, sigma).
Eigen::VectorXd original_chain(const ParamVector& theta);

double logistic(double t);
double logit(double p);

}  // namespace fiberld
