#include <cmath>
#include <limits>

#include "doctest.h"
#include "fiberld/optimizer.hpp"

using namespace fiberld;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

double rosenbrock(const Eigen::VectorXd& x, Eigen::VectorXd* g) {
  const double a = 1.0 - x(0);
  const double b = x(1) - x(0) * x(0);
  if (g) {
    g->resize(2);
    (*g)(0) = -2.0 * a - 400.0 * x(0) * b;
    (*g)(1) = 200.0 * b;
  }
  return a * a + 100.0 * b * b;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x(i++) = e;
  return x;
}

}  // namespace

TEST_CASE("unconstrained Rosenbrock") {
  const auto r = minimize_box(rosenbrock, vec({-1.2, 1.0}), vec({-kInf, -kInf}), vec({kInf, kInf}));
  CHECK(r.status == OptimStatus::success);
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.x(1) == doctest::Approx(1.0).epsilon(1e-5));
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] <= r.trace[i - 1]);
  CHECK(r.trace.front() == doctest::Approx(24.2));
}

TEST_CASE("active bounds") {
  const auto f = [](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
    if (g) *g = vec({2.0 * (x(0) - 3.0), 2.0 * (x(1) + 1.0), 2.0 * (x(2) - 0.5)});
    return (x(0) - 3.0) * (x(0) - 3.0) + (x(1) + 1.0) * (x(1) + 1.0) + (x(2) - 0.5) * (x(2) - 0.5);
  };
  const auto r = minimize_box(f, vec({1.0, 1.0, 1.0}), vec({0.0, 0.0, 0.0}), vec({2.0, 2.0, 2.0}));
  CHECK(r.status == OptimStatus::success);
  CHECK(r.x(0) == 2.0);
  CHECK(r.x(1) == 0.0);
  CHECK(r.x(2) == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("start outside the box is projected") {
  const auto f = [](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
    if (g) *g = vec({2.0 * x(0)});
    return x(0) * x(0);
  };
  const auto r = minimize_box(f, vec({10.0}), vec({1.0}), vec({5.0}));
  CHECK(r.x(0) == 1.0);
}

TEST_CASE("non-finite values are treated as infeasible") {
  const auto f = [](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
    if (x(0) <= 0.0) return kInf;
    if (g) *g = vec({1.0 - 1.0 / x(0)});
    return x(0) - std::log(x(0));
  };
  const auto r = minimize_box(f, vec({5.0}), vec({-10.0}), vec({10.0}));
  CHECK(r.status == OptimStatus::success);
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("iteration limit") {
  OptimizerOptions opts;
  opts.max_iter = 3;
  const auto r = minimize_box(rosenbrock, vec({-1.2, 1.0}), vec({-kInf, -kInf}), vec({kInf, kInf}), opts);
  CHECK(r.status == OptimStatus::max_iter);
  CHECK(r.iterations == 3);
}

TEST_CASE("finite-difference gradient respects bounds") {
  const auto f = [](const Eigen::VectorXd& x) {
    return x(0) < 0.0 || x(1) > 1.0 ? std::nan("") : std::sqrt(x(0)) + x(1) * x(1) * x(1);
  };
  const Eigen::VectorXd lower = vec({0.0, -1.0});
  const Eigen::VectorXd upper = vec({2.0, 1.0});
  const auto g = finite_difference_gradient(f, vec({0.5, 1.0}), lower, upper, 1e-6);
  CHECK(g(0) == doctest::Approx(0.5 / std::sqrt(0.5)).epsilon(1e-6));
  CHECK(g(1) == doctest::Approx(3.0).epsilon(1e-5));
  const auto h = finite_difference_gradient(f, vec({1e-7, 0.2}), lower, upper, 1e-6);
  CHECK(std::isfinite(h(0)));
}
