#include <cmath>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "doctest.h"
#include "fiberld/densities.hpp"
#include "fiberld/errors.hpp"
#include "oracles.hpp"

using namespace fiberld;

namespace {

double ggd_reference(double y, double b, double d, double k) {
  return std::exp(std::log(d) - d * k * std::log(b) + (d * k - 1.0) * std::log(y) -
                  std::pow(y / b, d) - std::lgamma(k));
}

double integrate_half_line(const std::function<double(double)>& f) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-12);
}

Component ggd_from_theta(const Eigen::VectorXd& t) {
  return Component(GgdParams{std::exp(t(0)), std::exp(t(1)), std::exp(t(2))});
}

Component logn_from_theta(const Eigen::VectorXd& t) {
  return Component(LognParams{t(0), std::exp(t(1))});
}

}  // namespace

TEST_CASE("reference density values") {
  CHECK(std::abs(ggd_pdf(2.5, {1.8, 2.7, 2.6}) - 0.6689186996) < 1e-9);
  CHECK(std::abs(ggd_pdf(5.0, {1.8, 2.7, 2.6}) - 0.0000692969) < 1e-9);
  CHECK(std::abs(logn_pdf(0.1, {-2.0, 0.5}) - 6.643761) < 1e-6);
  CHECK(std::abs(logn_pdf(0.45, {-2.0, 0.5}) - 0.09882040) < 1e-6);
}

TEST_CASE("generalized gamma density against a direct formula") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.2, 4.0);
  for (int i = 0; i < 200; ++i) {
    const double b = u(rng), d = u(rng), k = u(rng), y = u(rng);
    CHECK(ggd_pdf(y, {b, d, k}) == doctest::Approx(ggd_reference(y, b, d, k)).epsilon(1e-12));
  }
}

TEST_CASE("densities integrate to one") {
  for (GgdParams p : {GgdParams{1.8, 2.7, 2.6}, GgdParams{0.1, 1.5, 2.0}, GgdParams{2.4, 3.3, 1.5},
                      GgdParams{0.5, 0.7, 3.0}}) {
    CHECK(integrate_half_line([&](double y) { return ggd_pdf(y, p); }) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
  for (LognParams p : {LognParams{-2.0, 0.5}, LognParams{0.9, 0.24}, LognParams{-1.6, 1.55}}) {
    CHECK(integrate_half_line([&](double y) { return y > 0.0 ? logn_pdf(y, p) : 0.0; }) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("generalized gamma log-density derivatives by finite differences") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.2);
  std::uniform_real_distribution<double> uy(0.05, 6.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd t(3);
    t << u(rng), u(rng), u(rng);
    const double y = uy(rng);
    const auto terms = ggd_from_theta(t).log_terms(y, 2);
    const auto logf = [&](const Eigen::VectorXd& x) { return ggd_from_theta(x).log_pdf(y); };
    const auto score = [&](const Eigen::VectorXd& x) {
      const auto s = ggd_from_theta(x).log_terms(y, 1).score;
      return Eigen::Vector3d(s[0], s[1], s[2]).eval();
    };
    const Eigen::Vector3d s(terms.score[0], terms.score[1], terms.score[2]);
    Eigen::Matrix3d h;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) h(i, j) = terms.dscore[i][j];
    CHECK(oracle::max_rel_error(s, oracle::fd_gradient(logf, t)) < 1e-6);
    CHECK(oracle::max_rel_error(h, oracle::fd_jacobian(
                                       [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return score(x); }, t)) < 1e-6);
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("density gradient and Hessian helpers by finite differences") {
  const GgdParams p{1.8, 2.7, 2.6};
  Eigen::VectorXd t(3);
  t << std::log(p.b), std::log(p.d), std::log(p.k);
  for (double y : {0.4, 1.7, 2.5, 3.6}) {
    const auto f = [&](const Eigen::VectorXd& x) { return ggd_from_theta(x).pdf(y); };
    const auto g = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      return ggd_grad_theta(y, {std::exp(x(0)), std::exp(x(1)), std::exp(x(2))});
    };
    CHECK(oracle::max_rel_error(ggd_grad_theta(y, p), oracle::fd_gradient(f, t)) < 1e-6);
    CHECK(oracle::max_rel_error(ggd_hess_theta(y, p), oracle::fd_jacobian(g, t)) < 1e-5);
  }
  const LognParams q{-2.0, 0.5};
  Eigen::VectorXd s(2);
  s << q.mu, std::log(q.sigma);
  for (double y : {0.05, 0.1, 0.3}) {
    const auto f = [&](const Eigen::VectorXd& x) { return logn_from_theta(x).pdf(y); };
    const auto g = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      return logn_grad_theta(y, {x(0), std::exp(x(1))});
    };
    CHECK(oracle::max_rel_error(logn_grad_theta(y, q), oracle::fd_gradient(f, s)) < 1e-6);
    CHECK(oracle::max_rel_error(logn_hess_theta(y, q), oracle::fd_jacobian(g, s)) < 1e-5);
  }
}

TEST_CASE("closed forms of the log-density scores") {
  const double b = 2.0, d = 1.7, k = 2.3;
  const Component c(GgdParams{b, d, k});
  // The scale score d((y/b)^d - k) vanishes where (y/b)^d = k.
  const double y0 = b * std::pow(k, 1.0 / d);
  CHECK(std::abs(c.log_terms(y0, 1).score[0]) < 1e-12);
  const double y = 1.3;
  CHECK(c.log_terms(y, 1).score[0] == doctest::Approx(d * (std::pow(y / b, d) - k)));

  const Component ln(LognParams{0.4, 0.6});
  const double q = (std::log(y) - 0.4) / 0.6;
  const auto t = ln.log_terms(y, 2);
  CHECK(t.score[0] == doctest::Approx(q / 0.6));
  CHECK(t.score[1] == doctest::Approx(q * q - 1.0));
  CHECK(t.dscore[0][0] == doctest::Approx(-1.0 / 0.36));
  CHECK(t.dscore[0][1] == doctest::Approx(-2.0 * q / 0.6));
  CHECK(t.dscore[1][1] == doctest::Approx(-2.0 * q * q));
}

TEST_CASE("log mode of the weighted integrand") {
  for (int power : {0, 1, 4}) {
    for (const Component& c : {Component(GgdParams{0.3, 1.4, 2.2}), Component(LognParams{0.5, 0.4})}) {
      const double u = c.log_mode(power);
      const auto g = [&](double v) { return (power + 1) * v + c.log_pdf(std::exp(v)); };
      CHECK(g(u) >= g(u + 1e-3));
      CHECK(g(u) >= g(u - 1e-3));
    }
  }
}

TEST_CASE("density domain") {
  CHECK_THROWS_AS(Component(GgdParams{-1.0, 1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(Component(GgdParams{1.0, 0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(Component(LognParams{0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(Component(LognParams{NAN, 1.0}), DomainError);
  CHECK_THROWS_AS(logn_pdf(0.0, {0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(ggd_pdf(-1.0, {1.0, 1.0, 1.0}), DomainError);
  CHECK(ggd_pdf(0.0, {1.0, 2.0, 2.0}) == 0.0);
  CHECK(ggd_pdf(0.0, {2.0, 1.0, 1.0}) == doctest::Approx(0.5));
  CHECK(std::isinf(ggd_pdf(0.0, {1.0, 0.5, 1.0})));
}

TEST_CASE("parameter vectors") {
  const MixtureParams mp{0.3, Component(GgdParams{0.1, 1.5, 2.0}), Component(GgdParams{2.0, 2.8, 2.2})};
  const ParamVector v = encode(mp);
  CHECK(v.size() == 7);
  CHECK(v.values(0) == doctest::Approx(std::log(0.3 / 0.7)));
  const Eigen::VectorXd orig = to_original(v);
  Eigen::VectorXd expected(7);
  expected << 0.3, 0.1, 1.5, 2.0, 2.0, 2.8, 2.2;
  CHECK((orig - expected).cwiseAbs().maxCoeff() < 1e-14);
  const ParamVector back = from_original(Family::ggamma, Layout::mixture, orig);
  CHECK((back.values - v.values).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(parameter_names(Family::ggamma, Layout::mixture) ==
        std::vector<std::string>{"eps", "b_fines", "d_fines", "k_fines", "b_fibers", "d_fibers", "k_fibers"});
  CHECK(parameter_names(Family::lognorm, Layout::single) == std::vector<std::string>{"mu_fibers", "sig_fibers"});

  const MixtureParams half{0.5, Component(GgdParams{1, 1, 1}), Component(GgdParams{2, 3, 4})};
  const Eigen::VectorXd chain = original_chain(encode(half));
  CHECK(chain(0) == doctest::Approx(0.25));
  CHECK(chain(4) == doctest::Approx(2.0));
  CHECK(chain(6) == doctest::Approx(4.0));

  const MixtureParams ln{0.2, Component(LognParams{-1.5, 0.7}), Component(LognParams{0.9, 0.3})};
  const Eigen::VectorXd lchain = original_chain(encode(ln));
  Eigen::VectorXd lexp(5);
  lexp << 0.2 - 0.04, 1.0, 0.7, 1.0, 0.3;
  CHECK((lchain - lexp).cwiseAbs().maxCoeff() < 1e-14);

  const MixtureParams edge{0.0, Component(GgdParams{1, 1, 1}), Component(GgdParams{2, 3, 4})};
  CHECK_THROWS_AS(encode(edge), DomainError);
  const MixtureParams bad{1.5, Component(GgdParams{1, 1, 1}), Component(GgdParams{2, 3, 4})};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  const MixtureParams mixed{0.5, Component(GgdParams{1, 1, 1}), Component(LognParams{0, 1})};
  CHECK_THROWS_AS(mixed.validate(), DomainError);
}
