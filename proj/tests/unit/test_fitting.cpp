#include <cmath>
#include <limits>
#include <numeric>

#include "doctest.h"
#include "fiberld/errors.hpp"
#include "fiberld/fitting.hpp"
#include "fiberld/optimizer.hpp"
#include "fiberld/parallel.hpp"
#include "fiberld/random.hpp"
#include "fiberld/simulate.hpp"

using namespace fiberld;

namespace {

const Component kTruth(GgdParams{2.4, 3.3, 1.5});
const CoreGeometry kCore(2.5);

Dataset microscopy_data(std::size_t n, std::uint64_t seed) {
  SimSpec spec;
  spec.scale = Scale::V;
  spec.params = kTruth;
  spec.geom = kCore;
  spec.n = n;
  spec.seed = seed;
  return Dataset{sample(spec), Scale::V};
}

Dataset ofa_data(const MixtureParams& mp, const CoreGeometry& geom, std::size_t n, std::uint64_t seed) {
  SimSpec spec;
  spec.scale = Scale::X;
  spec.params = mp;
  spec.geom = geom;
  spec.n = n;
  spec.seed = seed;
  return Dataset{sample(spec), Scale::X};
}

const ModelSpec kMicro{Family::ggamma, DataType::microscopy, kCore};

}  // namespace

TEST_CASE("standard error of a one-parameter exponential model") {
  // Rate lambda on the log scale: l = n theta - e^theta sum(x); I(lambda) = n / lambda^2.
  Rng rng(4);
  const double rate = 2.0;
  const int n = 400;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += -std::log(rng.uniform()) / rate;
  const auto negll = [&](const Eigen::VectorXd& t, Eigen::VectorXd* g) {
    const double lam = std::exp(t(0));
    if (g) *g = Eigen::VectorXd::Constant(1, -(n - lam * sum) / n);
    return -(n * t(0) - lam * sum) / n;
  };
  const Eigen::VectorXd lo = Eigen::VectorXd::Constant(1, -10.0);
  const Eigen::VectorXd hi = Eigen::VectorXd::Constant(1, 10.0);
  const auto r = minimize_box(negll, Eigen::VectorXd::Zero(1), lo, hi);
  const double lam_hat = std::exp(r.x(0));
  CHECK(lam_hat == doctest::Approx(n / sum).epsilon(1e-6));
  const Eigen::MatrixXd hessian = Eigen::MatrixXd::Constant(1, 1, -lam_hat * sum);
  const Eigen::MatrixXd cov = delta_covariance(inverse_negative_hessian(hessian),
                                               Eigen::VectorXd::Constant(1, lam_hat));
  const double se = standard_errors(cov)(0);
  CHECK(se == doctest::Approx(rate / std::sqrt(static_cast<double>(n))).epsilon(0.05));
}

TEST_CASE("default start and bounds") {
  const MixtureParams mp = decode_mixture(default_ggd_start());
  CHECK(mp.eps == doctest::Approx(0.5));
  CHECK(mp.fines.ggd().b == doctest::Approx(0.01));
  CHECK(mp.fines.ggd().d == doctest::Approx(0.1));
  CHECK(mp.fines.ggd().k == doctest::Approx(10.0));
  CHECK(mp.fibers.ggd().b == doctest::Approx(2.0));
  Eigen::VectorXd lo, hi;
  default_bounds(Family::lognorm, Layout::mixture, lo, hi);
  CHECK(lo.size() == 5);
  CHECK(lo(0) == 1e-4);
  CHECK(hi(0) == 1.0 - 1e-4);
  CHECK(lo(1) == -10.0);
  CHECK(hi(2) == 10.0);
}

TEST_CASE("initialization") {
  const MixtureParams truth{0.3, Component(GgdParams{0.1, 1.5, 2.0}), Component(GgdParams{2.0, 2.8, 2.2})};
  const CoreGeometry geom(6.0);
  const Dataset data = ofa_data(truth, geom, 1500, 2);
  const ModelSpec model{Family::ggamma, DataType::ofa, geom};
  bool fell_back = true;
  const ParamVector start = initialize(data, model, {}, &fell_back);
  CHECK_FALSE(fell_back);
  CHECK(std::abs(decode_mixture(start).eps - 0.3) < 0.15);

  const ModelSpec logn{Family::lognorm, DataType::ofa, geom};
  const MixtureParams ltruth{0.3, Component(LognParams{-2.3, 0.5}), Component(LognParams{0.7, 0.35})};
  const ParamVector lstart = initialize(ofa_data(ltruth, geom, 1500, 2), logn, {});
  CHECK(std::abs(decode_mixture(lstart).eps - 0.3) < 0.15);

  FitConfig cfg;
  Eigen::VectorXd par(7);
  par << 0.5, 0.01, 1, 1, 2, 1, 1;
  cfg.par_start = par;
  const ParamVector given = initialize(data, model, cfg);
  CHECK((given.values - from_original(Family::ggamma, Layout::mixture, par).values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("microscopy fit") {
  const Dataset data = microscopy_data(300, 7);
  const FitResult fit = fiberld::fit(data, kMicro);
  REQUIRE(fit.convergence == Convergence::success);
  REQUIRE(fit.has_covariance());
  const auto truth = kTruth.original();
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(fit.theta_tilde_hat(i) - truth[i]) < 4.0 * fit.se_tilde(i));
  }
  CHECK((fit.cov_theta - fit.cov_theta.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((fit.cov_theta.diagonal().array() >= 0.0).all());
  const Eigen::VectorXd chain = original_chain(fit.theta_hat);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(fit.cov_tilde(i, j) == doctest::Approx(chain(i) * fit.cov_theta(i, j) * chain(j)));
    }
  }
  CHECK((covariance_original_scale(fit) - fit.cov_tilde).cwiseAbs().maxCoeff() == 0.0);
  CHECK(fit.starts_tried == 5);
  CHECK(fit.n == 300);

  const ParamVector start = initialize(data, kMicro, {});
  CHECK(fit.loglik >= micro_loglik(start, data, kCore).loglik);
  for (const auto& s : fit.starts) {
    if (s.ok) CHECK(fit.loglik >= s.loglik - 1e-9 * std::abs(fit.loglik));
  }
  for (std::size_t i = 1; i < fit.trace.size(); ++i) CHECK(fit.trace[i] <= fit.trace[i - 1]);
}

TEST_CASE("fits are deterministic across runs and thread counts") {
  const MixtureParams truth{0.3, Component(GgdParams{0.1, 1.5, 2.0}), Component(GgdParams{2.0, 2.8, 2.2})};
  const CoreGeometry geom(3.0);
  const Dataset data = ofa_data(truth, geom, 300, 5);
  const ModelSpec model{Family::ggamma, DataType::ofa, geom};
  FitConfig cfg;
  cfg.n_starts = 2;
  set_thread_limit(1);
  const FitResult a = fiberld::fit(data, model, cfg);
  set_thread_limit(4);
  const FitResult b = fiberld::fit(data, model, cfg);
  set_thread_limit(0);
  CHECK(a.loglik == b.loglik);
  CHECK(a.theta_hat.values == b.theta_hat.values);
  CHECK(a.hessian == b.hessian);
  CHECK(a.best_start == b.best_start);
}

TEST_CASE("fixed coordinates") {
  const MixtureParams truth{0.3, Component(GgdParams{0.1, 1.5, 2.0}), Component(GgdParams{2.0, 2.8, 2.2})};
  const CoreGeometry geom(3.0);
  const Dataset data = ofa_data(truth, geom, 300, 8);
  const ModelSpec model{Family::ggamma, DataType::ofa, geom};
  FitConfig cfg;
  Eigen::VectorXd par(7);
  par << 0.5, 0.01, 1, 1, 2, 1, 1;
  cfg.par_start = par;
  cfg.fixed_mask = {false, false, true, false, false, true, false};
  cfg.n_starts = 2;
  const FitResult fit = fiberld::fit(data, model, cfg);
  CHECK(fit.theta_tilde_hat(2) == 1.0);
  CHECK(fit.theta_tilde_hat(5) == 1.0);
  // With d = 1 the fines block is a gamma with mean b k.
  CHECK(fit.theta_tilde_hat(1) * fit.theta_tilde_hat(3) < fit.theta_tilde_hat(4) * fit.theta_tilde_hat(6));
  CHECK(std::abs(fit.theta_tilde_hat(0) - 0.3) < 0.15);
  if (fit.has_covariance()) {
    CHECK(fit.cov_theta.row(2).cwiseAbs().maxCoeff() == 0.0);
    CHECK(fit.se_tilde(5) == 0.0);
  }

  FitConfig all = cfg;
  all.fixed_mask.assign(7, true);
  const FitResult frozen = fiberld::fit(data, model, all);
  CHECK(frozen.iterations == 0);
  CHECK((frozen.theta_tilde_hat - par).cwiseAbs().maxCoeff() < 1e-14);
  const auto at = model_loglik(from_original(Family::ggamma, Layout::mixture, par), data, model, {}, 2);
  CHECK(frozen.loglik == at.loglik);
  CHECK(frozen.hessian == at.hessian);

  FitConfig no_start;
  no_start.fixed_mask = cfg.fixed_mask;
  CHECK_THROWS_AS(fiberld::fit(data, model, no_start), DomainError);
}

TEST_CASE("finite-difference gradients reach the same optimum") {
  const Dataset data = microscopy_data(200, 12);
  FitConfig cfg;
  cfg.n_starts = 1;
  const FitResult analytic = fiberld::fit(data, kMicro, cfg);
  cfg.grad_mode = GradMode::finite_difference;
  const FitResult fd = fiberld::fit(data, kMicro, cfg);
  CHECK(fd.loglik == doctest::Approx(analytic.loglik).epsilon(1e-7));
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(fd.theta_tilde_hat(i) - analytic.theta_tilde_hat(i)) < 0.05 * analytic.se_tilde(i));
  }
}

TEST_CASE("configuration and failure reporting") {
  const Dataset data = microscopy_data(50, 3);
  FitConfig cfg;
  Eigen::VectorXd lo(3), hi(3);
  lo << 1, 1, 1;
  hi << 2, 0.5, 2;
  cfg.lower = lo;
  cfg.upper = hi;
  CHECK_THROWS_AS(fiberld::fit(data, kMicro, cfg), DomainError);
  CHECK_THROWS_AS(fiberld::fit(Dataset{data.values, Scale::X}, kMicro), DomainError);

  FitConfig broken;
  broken.quad.abs_tol = 1e-300;
  broken.quad.rel_tol = 1e-300;
  broken.quad.max_subdivisions = 10;
  broken.n_starts = 2;
  try {
    fiberld::fit(data, kMicro, broken);
    FAIL("expected FitError");
  } catch (const FitError& e) {
    CHECK(e.starts().size() == 2);
    CHECK_FALSE(e.starts()[0].ok);
  }

  Eigen::MatrixXd flat = Eigen::MatrixXd::Zero(2, 2);
  flat(0, 0) = -1.0;
  CHECK(inverse_negative_hessian(flat).size() == 0);
  CHECK(inverse_negative_hessian(flat, {false, true}).size() == 4);
  CHECK(std::string(to_string(Convergence::singular_hessian)) == "singular_hessian");
}
