#include "fiberld/scales.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fiberld/errors.hpp"
#include "fiberld/parallel.hpp"

namespace fiberld {
namespace {

constexpr double kPi = std::numbers::pi;

// Packed upper triangle of a 3x3 symmetric matrix.
constexpr std::array<std::array<int, 2>, 6> kPacked = {
    {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}};

// Width of the integrand bump in log length; only used to size the first
// step of the tail search.
double log_scale(const Component& c) {
  return c.family() == Family::ggamma ? 1.0 / c.ggd().d : c.logn().sigma;
}

void require_observed(double x, const CoreGeometry& geom, const char* what) {
  if (!(x > 0.0) || !(x < geom.diameter())) {
    throw DomainError(std::string(what) + ": length must lie in (0, 2r) = (0, " +
                      std::to_string(geom.diameter()) + "), got " + std::to_string(x));
  }
}

// f, df and d2f (packed) at y from the log-density terms.
template <int Order>
struct DensityDerivs {
  static constexpr int kCount = 1 + (Order >= 1 ? 3 : 0) + (Order >= 2 ? 6 : 0);
  std::array<double, kCount> v{};
};

template <int Order>
DensityDerivs<Order> density_derivs(const Component& c, double y) {
  DensityDerivs<Order> out;
  const auto t = c.log_terms(y, Order);
  const double f = std::exp(t.log_f);
  out.v[0] = f;
  if constexpr (Order >= 1) {
    for (int i = 0; i < 3; ++i) out.v[1 + i] = f * t.score[i];
  }
  if constexpr (Order >= 2) {
    for (int p = 0; p < 6; ++p) {
      const int i = kPacked[p][0];
      const int j = kPacked[p][1];
      out.v[4 + p] = f * (t.score[i] * t.score[j] + t.dscore[i][j]);
    }
  }
  return out;
}

template <std::size_t N>
void unpack_into(const std::array<double, N>& packed, int offset, double& value,
                 std::array<double, kMaxComponentDim>& grad,
                 std::array<std::array<double, kMaxComponentDim>, kMaxComponentDim>& hess,
                 int order) {
  value = packed[offset];
  if (order >= 1) {
    for (int i = 0; i < 3; ++i) grad[i] = packed[offset + 1 + i];
  }
  if (order >= 2) {
    for (int p = 0; p < 6; ++p) {
      const int i = kPacked[p][0];
      const int j = kPacked[p][1];
      hess[i][j] = hess[j][i] = packed[offset + 4 + p];
    }
  }
}

// ---------------------------------------------------------------------------

template <int Order>
UncutMass uncut_mass_impl(const Component& c, const CoreGeometry& geom,
                          const QuadratureConfig& cfg) {
  constexpr int kCount = DensityDerivs<Order>::kCount;
  const double r = geom.radius();
  auto integrand_y = [&](double y, double jacobian) {
    std::array<double, kCount> out{};
    if (!(y > 0.0) || y >= 2.0 * r) return out;
    const auto d = density_derivs<Order>(c, y);
    const double w = prob_uncut(y, geom) * jacobian;
    for (int i = 0; i < kCount; ++i) out[i] = d.v[i] * w;
    return out;
  };
  std::array<double, kCount> total{};
  const double log_r = std::log(r);
  const LogWindow window = log_window(c, 0, cfg);
  if (window.lo < log_r) {
    auto lower = [&](double u) {
      const double y = std::exp(u);
      return integrand_y(y, y);
    };
    const auto res = integrate_vector<kCount>(lower, window.lo, log_r, cfg, 4);
    for (int i = 0; i < kCount; ++i) total[i] += res.value[i];
  }
  auto upper = [&](double phi) {
    return integrand_y(2.0 * r * std::sin(phi), 2.0 * r * std::cos(phi));
  };
  const auto res = integrate_vector<kCount>(upper, kPi / 6.0, kPi / 2.0, cfg, 2);
  for (int i = 0; i < kCount; ++i) total[i] += res.value[i];

  UncutMass out;
  unpack_into(total, 0, out.value, out.gradient, out.hessian, Order);
  return out;
}

template <int Order>
std::vector<ObservedTerms> observed_terms_impl(const Component& c,
                                               std::span<const double> points,
                                               const CoreGeometry& geom,
                                               const QuadratureConfig& cfg) {
  constexpr int kBlock = DensityDerivs<Order>::kCount;
  constexpr std::size_t kWidth = 2 * kBlock;
  using Vec = std::array<double, kWidth>;

  const double r = geom.radius();
  const std::size_t m = points.size();
  std::vector<ObservedTerms> out(m);
  if (m == 0) return out;

  // Tail integrals of f/t and y f/t (and derivatives) in log length.
  auto integrand = [&](double u) {
    Vec v{};
    const double y = std::exp(u);
    const auto d = density_derivs<Order>(c, y);
    const double base = y / (kPi * r * r + 2.0 * r * y);
    for (int i = 0; i < kBlock; ++i) {
      v[i] = d.v[i] * base;
      v[kBlock + i] = d.v[i] * base * y;
    }
    return v;
  };

  const double log_top = std::max(log_window(c, 1, cfg).hi, std::log(points[m - 1]));
  std::vector<Vec> segment(m);
  parallel_for(m, [&](std::size_t j) {
    const double a = std::log(points[j]);
    const double b = j + 1 < m ? std::log(points[j + 1]) : log_top;
    try {
      segment[j] = integrate_vector<kWidth>(integrand, a, b, cfg, j + 1 < m ? 1 : 4).value;
    } catch (const QuadratureError& e) {
      throw QuadratureError("tail integral of the cut kernel above x = " +
                                std::to_string(points[j]) + ": " + e.what(),
                            e.error_estimate());
    }
  });

  Vec tail{};
  for (std::size_t jj = m; jj-- > 0;) {
    for (std::size_t i = 0; i < kWidth; ++i) tail[i] += segment[jj][i];
    const double x = points[jj];
    const double root = std::sqrt(4.0 * r * r - x * x);
    const double a = 8.0 * r * r - 3.0 * x * x;
    const double uncut = prob_uncut(x, geom);
    const auto d = density_derivs<Order>(c, x);
    std::array<double, kBlock> combined{};
    for (int i = 0; i < kBlock; ++i) {
      combined[i] = uncut * d.v[i] + (a * tail[i] + x * tail[kBlock + i]) / root;
    }
    auto& o = out[jj];
    unpack_into(combined, 0, o.value, o.gradient, o.hessian, Order);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

LogWindow log_window(const Component& c, int power, const QuadratureConfig& cfg) {
  const double mode = c.log_mode(power);
  auto log_g = [&](double u) { return (power + 1) * u + c.log_pdf(std::exp(u)); };
  const double peak = log_g(mode);
  const double drop = std::log(cfg.tail_cutoff);
  const double first = 0.5 * log_scale(c);
  auto search = [&](double direction) {
    double delta = first;
    for (int it = 0; it < 200; ++it) {
      const double u = mode + direction * delta;
      const double g = log_g(u);
      if (!(g - peak > drop)) return u;
      delta *= 2.0;
    }
    throw QuadratureError("could not bracket the density tail", 0.0);
  };
  return {search(-1.0), search(1.0)};
}

double integrate_against_density(const Component& c, const std::function<double(double)>& h,
                                 const QuadratureConfig& cfg, int power) {
  cfg.validate();
  const LogWindow lo = log_window(c, 0, cfg);
  const LogWindow hi = log_window(c, power, cfg);
  auto integrand = [&](double u) {
    const double y = std::exp(u);
    return std::array<double, 1>{h(y) * c.pdf(y) * y};
  };
  return integrate_vector<1>(integrand, std::min(lo.lo, hi.lo), std::max(lo.hi, hi.hi), cfg, 8)
      .value[0];
}

double integrate_observed_window(const std::function<double(double)>& g,
                                 const CoreGeometry& geom, const QuadratureConfig& cfg) {
  cfg.validate();
  const double r = geom.radius();
  const double log_r = std::log(r);
  // Below r e^{-50} the neglected mass of a bounded or mildly singular
  // integrand is far below any tolerance in use.
  auto lower = [&](double u) {
    const double x = std::exp(u);
    return std::array<double, 1>{g(x) * x};
  };
  auto upper = [&](double phi) {
    return std::array<double, 1>{g(2.0 * r * std::sin(phi)) * 2.0 * r * std::cos(phi)};
  };
  return integrate_vector<1>(lower, log_r - 50.0, log_r, cfg, 8).value[0] +
         integrate_vector<1>(upper, kPi / 6.0, kPi / 2.0, cfg, 2).value[0];
}

// ---------------------------------------------------------------------------

WeightedMoments weighted_moments(const Component& c, const CoreGeometry& geom,
                                 const QuadratureConfig& cfg, bool with_gradient) {
  cfg.validate();
  const double r = geom.radius();
  constexpr std::size_t kWidth = 5 + 5 * kMaxComponentDim;
  const int order = with_gradient ? 1 : 0;
  auto integrand = [&](double u) {
    std::array<double, kWidth> v{};
    const double y = std::exp(u);
    const auto t = c.log_terms(y, order);
    double term = std::exp(t.log_f) * y / (kPi * r + 2.0 * y);
    for (int m = 0; m < 5; ++m) {
      v[m] = term;
      if (with_gradient) {
        for (int i = 0; i < kMaxComponentDim; ++i) v[5 + 3 * m + i] = term * t.score[i];
      }
      term *= y;
    }
    return v;
  };
  const double lo = log_window(c, 0, cfg).lo;
  const double hi = log_window(c, 4, cfg).hi;
  const auto res = integrate_vector<kWidth>(integrand, lo, hi, cfg, 8);
  WeightedMoments out;
  for (int m = 0; m < 5; ++m) {
    out.value[m] = res.value[m];
    for (int i = 0; i < kMaxComponentDim; ++i) out.gradient[m][i] = res.value[5 + 3 * m + i];
  }
  return out;
}

double mean_w_component(const Component& c, const CoreGeometry& geom,
                        const QuadratureConfig& cfg) {
  const auto wm = weighted_moments(c, geom, cfg, false);
  return 0.5 / wm.value[0] - 0.5 * kPi * geom.radius();
}

double moment_w(int m, const Component& c, const CoreGeometry& geom,
                const QuadratureConfig& cfg) {
  if (m < 1 || m > 4) throw DomainError("moment_w supports m = 1..4, got " + std::to_string(m));
  const auto wm = weighted_moments(c, geom, cfg, false);
  const double mean = 0.5 / wm.value[0] - 0.5 * kPi * geom.radius();
  return (kPi * geom.radius() + 2.0 * mean) * wm.value[m];
}

double density_w_component(double w, const Component& c, const CoreGeometry& geom,
                           const QuadratureConfig& cfg) {
  if (std::isnan(w) || w < 0.0) throw DomainError("W-scale length must be non-negative");
  const double mean = mean_w_component(c, geom, cfg);
  const double pr = kPi * geom.radius();
  return (pr + 2.0 * mean) / (pr + 2.0 * w) * c.pdf(w);
}

double tree_mean_length(double eps, double mean_fines, double mean_fibers,
                        const CoreGeometry& geom) {
  const double pr = kPi * geom.radius();
  const double num = 2.0 * mean_fines * mean_fibers + eps * pr * mean_fines +
                     (1.0 - eps) * pr * mean_fibers;
  const double den = 2.0 * (eps * mean_fibers + (1.0 - eps) * mean_fines) + pr;
  return num / den;
}

double tree_fines_proportion(double eps, double tree_mean, double mean_fines,
                             const CoreGeometry& geom) {
  const double pr = kPi * geom.radius();
  return eps * (pr + 2.0 * tree_mean) / (pr + 2.0 * mean_fines);
}

TreeComposition tree_composition(const MixtureParams& mp, const CoreGeometry& geom,
                                 const QuadratureConfig& cfg) {
  mp.validate();
  TreeComposition out{};
  out.mean_w_fines = mean_w_component(mp.fines, geom, cfg);
  out.mean_w_fibers = mean_w_component(mp.fibers, geom, cfg);
  out.mean_w = tree_mean_length(mp.eps, out.mean_w_fines, out.mean_w_fibers, geom);
  out.eps_tilde = tree_fines_proportion(mp.eps, out.mean_w, out.mean_w_fines, geom);
  return out;
}

// ---------------------------------------------------------------------------

UncutMass uncut_mass(const Component& c, const CoreGeometry& geom, const QuadratureConfig& cfg,
                     int order) {
  cfg.validate();
  switch (order) {
    case 0:
      return uncut_mass_impl<0>(c, geom, cfg);
    case 1:
      return uncut_mass_impl<1>(c, geom, cfg);
    default:
      return uncut_mass_impl<2>(c, geom, cfg);
  }
}

double density_v(double v, const Component& fibers, const CoreGeometry& geom,
                 const QuadratureConfig& cfg) {
  require_observed(v, geom, "density_v");
  const double k = uncut_mass(fibers, geom, cfg, 0).value;
  return fibers.pdf(v) * prob_uncut(v, geom) / k;
}

std::vector<ObservedTerms> observed_terms(const Component& c, std::span<const double> points,
                                          const CoreGeometry& geom, const QuadratureConfig& cfg,
                                          int order) {
  cfg.validate();
  for (std::size_t i = 0; i < points.size(); ++i) {
    require_observed(points[i], geom, "observed_terms");
    if (i > 0 && !(points[i] > points[i - 1])) {
      throw DomainError("observed_terms: points must be strictly increasing");
    }
  }
  switch (order) {
    case 0:
      return observed_terms_impl<0>(c, points, geom, cfg);
    case 1:
      return observed_terms_impl<1>(c, points, geom, cfg);
    default:
      return observed_terms_impl<2>(c, points, geom, cfg);
  }
}

double density_x_component(double x, const Component& c, const CoreGeometry& geom,
                           const QuadratureConfig& cfg) {
  require_observed(x, geom, "density_x_component");
  const double pts[1] = {x};
  return observed_terms(c, pts, geom, cfg, 0)[0].value;
}

double density_y_mixture(double y, const MixtureParams& mp) {
  mp.validate();
  if (mp.eps == 0.0) return mp.fibers.pdf(y);
  if (mp.eps == 1.0) return mp.fines.pdf(y);
  return mp.eps * mp.fines.pdf(y) + (1.0 - mp.eps) * mp.fibers.pdf(y);
}

double density_x_mixture(double x, const MixtureParams& mp, const CoreGeometry& geom,
                         const QuadratureConfig& cfg) {
  mp.validate();
  if (mp.eps == 0.0) return density_x_component(x, mp.fibers, geom, cfg);
  if (mp.eps == 1.0) return density_x_component(x, mp.fines, geom, cfg);
  return mp.eps * density_x_component(x, mp.fines, geom, cfg) +
         (1.0 - mp.eps) * density_x_component(x, mp.fibers, geom, cfg);
}

double density_w_mixture(double w, const MixtureParams& mp, const CoreGeometry& geom,
                         const QuadratureConfig& cfg) {
  return ScaleDensity(Scale::W, Part::mixture, mp, geom, cfg)(w);
}

// ---------------------------------------------------------------------------

ScaleDensity::ScaleDensity(Scale scale, Part part, PopulationParams params, CoreGeometry geom,
                           QuadratureConfig cfg)
    : scale_(scale), part_(part), geom_(geom), cfg_(cfg) {
  cfg_.validate();
  if (scale == Scale::V && part != Part::fibers) {
    throw DomainError("the V scale (uncut fibers) is only defined for the fibers component");
  }
  if (const auto* single = std::get_if<Component>(&params)) {
    if (part == Part::mixture) {
      throw DomainError("a mixture density needs mixture parameters");
    }
    components_.push_back(*single);
  } else {
    const auto& mp = std::get<MixtureParams>(params);
    mp.validate();
    switch (part) {
      case Part::fines:
        components_.push_back(mp.fines);
        break;
      case Part::fibers:
        components_.push_back(mp.fibers);
        break;
      case Part::mixture:
        components_.push_back(mp.fines);
        components_.push_back(mp.fibers);
        eps_ = mp.eps;
        break;
    }
  }
  if (scale == Scale::W) {
    for (const auto& c : components_) scale_constants_.push_back(mean_w_component(c, geom_, cfg_));
    if (part == Part::mixture) {
      const double tree_mean =
          tree_mean_length(eps_, scale_constants_[0], scale_constants_[1], geom_);
      eps_ = tree_fines_proportion(eps_, tree_mean, scale_constants_[0], geom_);
    }
  } else if (scale == Scale::V) {
    scale_constants_.push_back(uncut_mass(components_[0], geom_, cfg_, 0).value);
  }
}

double ScaleDensity::support_upper() const {
  return scale_ == Scale::X || scale_ == Scale::V ? geom_.diameter()
                                                  : std::numeric_limits<double>::infinity();
}

void ScaleDensity::check_point(double length) const {
  if (scale_ == Scale::X || scale_ == Scale::V) {
    require_observed(length, geom_, "ScaleDensity");
  } else if (std::isnan(length) || length < 0.0) {
    throw DomainError("length must be non-negative, got " + std::to_string(length));
  }
}

double ScaleDensity::operator()(double length) const {
  const double pts[1] = {length};
  return evaluate(pts)[0];
}

std::vector<double> ScaleDensity::evaluate(std::span<const double> lengths) const {
  for (double v : lengths) check_point(v);
  std::vector<double> out(lengths.size(), 0.0);
  const double pr = kPi * geom_.radius();

  auto combine = [&](auto&& per_component, std::size_t i) {
    if (components_.size() == 1) return per_component(0, i);
    double value = 0.0;
    if (eps_ > 0.0) value += eps_ * per_component(0, i);
    if (eps_ < 1.0) value += (1.0 - eps_) * per_component(1, i);
    return value;
  };

  switch (scale_) {
    case Scale::Y:
      for (std::size_t i = 0; i < lengths.size(); ++i) {
        out[i] = combine([&](int c, std::size_t j) { return components_[c].pdf(lengths[j]); }, i);
      }
      break;
    case Scale::W:
      for (std::size_t i = 0; i < lengths.size(); ++i) {
        out[i] = combine(
            [&](int c, std::size_t j) {
              const double w = lengths[j];
              return (pr + 2.0 * scale_constants_[c]) / (pr + 2.0 * w) * components_[c].pdf(w);
            },
            i);
      }
      break;
    case Scale::V:
      for (std::size_t i = 0; i < lengths.size(); ++i) {
        const double v = lengths[i];
        out[i] = components_[0].pdf(v) * prob_uncut(v, geom_) / scale_constants_[0];
      }
      break;
    case Scale::X: {
      std::vector<double> sorted(lengths.begin(), lengths.end());
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      std::vector<std::vector<ObservedTerms>> terms;
      for (const auto& c : components_) terms.push_back(observed_terms(c, sorted, geom_, cfg_, 0));
      for (std::size_t i = 0; i < lengths.size(); ++i) {
        const auto pos = static_cast<std::size_t>(
            std::lower_bound(sorted.begin(), sorted.end(), lengths[i]) - sorted.begin());
        out[i] = combine([&](int c, std::size_t) { return terms[c][pos].value; }, i);
      }
      break;
    }
  }
  return out;
}

}  // namespace fiberld
