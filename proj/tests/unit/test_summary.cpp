#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "doctest.h"
#include "fiberld/errors.hpp"
#include "fiberld/simulate.hpp"
#include "fiberld/summary.hpp"
#include "oracles.hpp"

using namespace fiberld;

namespace {

const CoreGeometry kCore(2.5);

QuadratureConfig tight() {
  QuadratureConfig q;
  q.abs_tol = 1e-14;
  q.rel_tol = 1e-13;
  q.max_subdivisions = 2000;
  return q;
}

double central_moment(const Component& c, double mean, int m) {
  const ScaleDensity f(Scale::W, Part::fibers, c, kCore);
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(
      [&](double w) {
        if (!(w > 0.0)) return 0.0;
        const double d = f(w);
        return d > 0.0 ? std::pow(w - mean, m) * d : 0.0;
      },
      0.0, std::numeric_limits<double>::infinity(), 1e-12);
}

}  // namespace

TEST_CASE("W-scale statistics at the generating parameters") {
  const auto s = w_statistics(Component(GgdParams{2.4, 3.3, 1.5}), kCore);
  CHECK(std::abs(s.mean() - 2.4536) < 1e-3);
  CHECK(std::abs(s.sd() - 0.6723) < 1e-3);
  CHECK(std::abs(s.skewness() - 0.0375) < 1e-3);
  CHECK(std::abs(s.kurtosis() - 2.7956) < 1e-3);
}

TEST_CASE("shape statistics equal standardized central moments") {
  for (const Component& c : {Component(GgdParams{2.4, 3.3, 1.5}), Component(GgdParams{0.2, 1.1, 2.5}),
                             Component(LognParams{0.7, 0.45})}) {
    const auto s = w_statistics(c, kCore, {}, false);
    const double var = central_moment(c, s.mean(), 2);
    CHECK(s.sd() == doctest::Approx(std::sqrt(var)).epsilon(1e-7));
    CHECK(s.skewness() == doctest::Approx(central_moment(c, s.mean(), 3) / std::pow(var, 1.5)).epsilon(1e-6));
    CHECK(s.kurtosis() == doctest::Approx(central_moment(c, s.mean(), 4) / (var * var)).epsilon(1e-7));
  }
}

TEST_CASE("W-scale statistic gradients by finite differences") {
  const auto q = tight();
  for (Family fam : {Family::ggamma, Family::lognorm}) {
    Eigen::VectorXd t(fam == Family::ggamma ? 3 : 2);
    if (fam == Family::ggamma) t << std::log(2.4), std::log(3.3), std::log(1.5);
    else t << 0.7, std::log(0.45);
    const auto comp = [&](const Eigen::VectorXd& x) {
      return Component::from_theta(fam, std::span<const double>(x.data(), x.size()));
    };
    const auto s = w_statistics(comp(t), kCore, q, true);
    for (int k = 0; k < 4; ++k) {
      const auto stat = [&](const Eigen::VectorXd& x) { return w_statistics(comp(x), kCore, q, false).value[k]; };
      Eigen::VectorXd g(t.size());
      for (int i = 0; i < t.size(); ++i) g(i) = s.gradient[k][i];
      CHECK(oracle::max_rel_error(g, oracle::fd_gradient(stat, t)) < 1e-5);
    }
  }
}

TEST_CASE("tree statistic gradients by finite differences") {
  const auto q = tight();
  const MixtureParams ggd{0.298, Component(GgdParams{0.001, 0.2921, 5.2519}),
                          Component(GgdParams{2.0014, 2.8224, 2.2236})};
  const MixtureParams logn{0.3, Component(LognParams{-2.0, 0.5}), Component(LognParams{0.7, 0.3})};
  const CoreGeometry geom(6.0);
  for (const MixtureParams& mp : {ggd, logn}) {
    const ParamVector theta = encode(mp);
    const auto ts = tree_statistics(theta, geom, q);
    const auto at = [&](const Eigen::VectorXd& x) {
      ParamVector t = theta;
      t.values = x;
      return tree_statistics(t, geom, q);
    };
    CHECK(oracle::max_rel_error(ts.grad_eps_tilde,
                                oracle::fd_gradient([&](const Eigen::VectorXd& x) { return at(x).eps_tilde; },
                                                    theta.values)) < 1e-5);
    CHECK(oracle::max_rel_error(ts.grad_mean_w,
                                oracle::fd_gradient([&](const Eigen::VectorXd& x) { return at(x).mean_w; },
                                                    theta.values)) < 1e-5);
    const auto tc = tree_composition(mp, geom);
    CHECK(ts.eps_tilde == doctest::Approx(tc.eps_tilde));
    CHECK(ts.mean_w == doctest::Approx(tc.mean_w));
  }
}

TEST_CASE("summary statistics of a fit") {
  SimSpec spec;
  spec.scale = Scale::V;
  spec.params = Component(GgdParams{2.4, 3.3, 1.5});
  spec.geom = kCore;
  spec.n = 300;
  spec.seed = 7;
  const Dataset data{sample(spec), Scale::V};
  const FitResult fit = fiberld::fit(data, ModelSpec{Family::ggamma, DataType::microscopy, kCore});
  REQUIRE(fit.has_covariance());
  const SummaryStats s = summary_ses(fit);
  CHECK_FALSE(s.fines.has_value());
  CHECK_FALSE(s.eps_tilde.has_value());
  CHECK(s.ses_available);
  const auto direct = w_statistics(decode_component(fit.theta_hat), kCore);
  CHECK(s.fibers.mean.value == doctest::Approx(direct.mean()));
  const Eigen::VectorXd g = s.fibers.mean.gradient;
  CHECK(s.fibers.mean.se == doctest::Approx(std::sqrt(g.dot(fit.cov_theta * g))));
  CHECK(std::abs(s.fibers.mean.value - 2.4536) < 3.0 * s.fibers.mean.se);

  FitResult bare = fit;
  bare.cov_theta.resize(0, 0);
  CHECK_THROWS_AS(summary_ses(bare), DomainError);
  const SummaryStats plain = summary_stats(bare);
  CHECK_FALSE(plain.ses_available);
  CHECK(std::isnan(plain.fibers.sd.se));
}

TEST_CASE("summary statistics of a mixture fit with fixed coordinates") {
  const MixtureParams truth{0.3, Component(GgdParams{0.1, 1.5, 2.0}), Component(GgdParams{2.0, 2.8, 2.2})};
  SimSpec spec;
  spec.scale = Scale::X;
  spec.params = truth;
  spec.geom = CoreGeometry(3.0);
  spec.n = 300;
  spec.seed = 4;
  FitConfig cfg;
  Eigen::VectorXd par(7);
  par << 0.3, 0.1, 1.5, 2.0, 2.0, 2.8, 2.2;
  cfg.par_start = par;
  cfg.fixed_mask = {false, false, true, false, false, true, false};
  cfg.n_starts = 1;
  const FitResult fit = fiberld::fit(Dataset{sample(spec), Scale::X},
                                     ModelSpec{Family::ggamma, DataType::ofa, spec.geom}, cfg);
  const SummaryStats s = summary_stats(fit);
  REQUIRE(s.fines.has_value());
  REQUIRE(s.eps_tilde.has_value());
  CHECK(s.fibers.mean.gradient(5) == 0.0);
  CHECK(s.fines->sd.gradient(2) == 0.0);
  CHECK(s.eps_tilde->gradient(2) == 0.0);
  CHECK(s.mean_w_overall->gradient(5) == 0.0);
  CHECK(s.n == 300);
}
