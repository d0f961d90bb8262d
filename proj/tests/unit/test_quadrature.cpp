#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fiberld/errors.hpp"
#include "fiberld/quadrature.hpp"
#include "oracles.hpp"

using namespace fiberld;

TEST_CASE("Kronrod rule is exact for low-degree polynomials") {
  const double v = integrate([](double x) { return 3 * x * x * x * x - 2 * x + 1; }, -1.0, 2.0);
  CHECK(v == doctest::Approx(3.0 * 33.0 / 5.0 - 3.0 + 3.0).epsilon(1e-14));
}

TEST_CASE("smooth and peaked integrands") {
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi) ==
        doctest::Approx(2.0).epsilon(1e-12));
  const auto peak = [](double x) { return 1.0 / (1e-4 + (x - 0.3) * (x - 0.3)); };
  const double exact = 100.0 * (std::atan(0.7 / 1e-2) + std::atan(0.3 / 1e-2));
  CHECK(integrate(peak, 0.0, 1.0) == doctest::Approx(exact).epsilon(1e-8));
  CHECK(integrate(peak, 0.0, 1.0) ==
        doctest::Approx(oracle::tanh_sinh(peak, 0.0, 1.0)).epsilon(1e-8));
}

TEST_CASE("vector integrands share one subdivision") {
  const auto f = [](double x) { return std::array<double, 3>{1.0, x, std::exp(-x)}; };
  const auto r = integrate_vector<3>(f, 0.0, 4.0, QuadratureConfig{}, 4);
  CHECK(r.value[0] == doctest::Approx(4.0));
  CHECK(r.value[1] == doctest::Approx(8.0));
  CHECK(r.value[2] == doctest::Approx(1.0 - std::exp(-4.0)).epsilon(1e-12));
  CHECK(r.intervals >= 4);
  const auto empty = integrate_vector<3>(f, 1.0, 1.0, QuadratureConfig{});
  CHECK(empty.value[0] == 0.0);
}

TEST_CASE("inverse square root endpoints") {
  const auto f = [](double x) { return 1.0 / std::sqrt((x - 1.0) * (3.0 - x)); };
  CHECK(integrate_sqrt_endpoints(f, 1.0, 3.0) == doctest::Approx(std::numbers::pi).epsilon(1e-10));
  const auto g = [](double x) { return x * x / std::sqrt(4.0 - x * x); };
  CHECK(integrate_sqrt_endpoints(g, -2.0, 2.0) ==
        doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-10));
}

TEST_CASE("quadrature failures") {
  CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0), QuadratureError);
  QuadratureConfig tight;
  tight.max_subdivisions = 10;
  tight.abs_tol = 1e-14;
  tight.rel_tol = 1e-14;
  try {
    integrate([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, tight);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(e.error_estimate() > 0.0);
  }
  QuadratureConfig bad;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = QuadratureConfig{};
  bad.max_subdivisions = 3;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}
