#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "doctest.h"
#include "fiberld/errors.hpp"
#include "fiberld/special_functions.hpp"

using namespace fiberld::special;

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

std::vector<double> log_uniform_points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(std::log(1e-3), std::log(1e3));
  std::vector<double> out(n);
  for (auto& v : out) v = std::exp(u(rng));
  return out;
}

}  // namespace

TEST_CASE("log_gamma at the integers and half-integers") {
  CHECK(std::abs(log_gamma(1.0)) < 1e-15);
  CHECK(std::abs(log_gamma(2.0)) < 1e-15);
  CHECK(log_gamma(2.6) == doctest::Approx(std::log(1.4296245588603045)).epsilon(1e-12));
  CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-13));
  CHECK(log_gamma(11.0) == doctest::Approx(std::log(3628800.0)).epsilon(1e-14));
}

TEST_CASE("digamma and trigamma closed forms") {
  CHECK(digamma(1.0) == doctest::Approx(-kEulerGamma).epsilon(1e-13));
  CHECK(digamma(2.0) == doctest::Approx(1.0 - kEulerGamma).epsilon(1e-13));
  CHECK(digamma(0.5) == doctest::Approx(-kEulerGamma - 2.0 * std::log(2.0)).epsilon(1e-13));
  const double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
  CHECK(trigamma(1.0) == doctest::Approx(pi2_6).epsilon(1e-13));
  CHECK(trigamma(2.0) == doctest::Approx(pi2_6 - 1.0).epsilon(1e-13));
  CHECK(trigamma(10.0) == doctest::Approx(0.10516633568168575).epsilon(1e-12));
}

TEST_CASE("agreement with Boost.Math on [1e-3, 1e3]") {
  for (double k : log_uniform_points(2000, 11)) {
    const double lg = boost::math::lgamma(k);
    CHECK(std::abs(log_gamma(k) - lg) <= 1e-12 * std::max(1.0, std::abs(lg)));
    const double ps = boost::math::digamma(k);
    CHECK(std::abs(digamma(k) - ps) <= 1e-10 * std::max(1e-3, std::abs(ps)));
    const double tg = boost::math::trigamma(k);
    CHECK(std::abs(trigamma(k) - tg) <= 1e-10 * std::abs(tg));
  }
}

TEST_CASE("recurrences hold for 1000 random arguments") {
  for (double k : log_uniform_points(1000, 23)) {
    CHECK(std::abs(log_gamma(k + 1.0) - log_gamma(k) - std::log(k)) <=
          1e-10 * std::max(1.0, std::abs(log_gamma(k + 1.0))));
    CHECK(std::abs(digamma(k + 1.0) - digamma(k) - 1.0 / k) <= 1e-10 * std::max(1.0, 1.0 / k));
    CHECK(std::abs(trigamma(k + 1.0) - trigamma(k) + 1.0 / (k * k)) <=
          1e-10 * std::max(1.0, 1.0 / (k * k)));
  }
}

TEST_CASE("derivative relations by central differences") {
  for (double k : log_uniform_points(200, 37)) {
    const double h = 1e-6 * k;
    const double fd_psi = (log_gamma(k + h) - log_gamma(k - h)) / (2.0 * h);
    CHECK(std::abs(fd_psi - digamma(k)) <= 1e-5 * std::max(1.0, std::abs(digamma(k))));
    const double fd_psi1 = (digamma(k + h) - digamma(k - h)) / (2.0 * h);
    CHECK(std::abs(fd_psi1 - trigamma(k)) <= 1e-5 * trigamma(k));
  }
}

TEST_CASE("non-positive and non-finite arguments are rejected") {
  for (double bad : {0.0, -1.0, -0.5, std::nan(""), static_cast<double>(INFINITY)}) {
    CHECK_THROWS_AS(log_gamma(bad), fiberld::DomainError);
    CHECK_THROWS_AS(digamma(bad), fiberld::DomainError);
    CHECK_THROWS_AS(trigamma(bad), fiberld::DomainError);
  }
}
