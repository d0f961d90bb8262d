#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fiberld/errors.hpp"
#include "fiberld/geometry.hpp"
#include "oracles.hpp"

using namespace fiberld;

TEST_CASE("core geometry validates its radius") {
  CHECK_THROWS_AS(CoreGeometry(0.0), DomainError);
  CHECK_THROWS_AS(CoreGeometry(-1.0), DomainError);
  CHECK_THROWS_AS(CoreGeometry(std::numeric_limits<double>::infinity()), DomainError);
  const CoreGeometry g(2.5);
  CHECK(g.diameter() == 5.0);
  CHECK(area_factor(1.0, g) == doctest::Approx(std::numbers::pi * 6.25 + 5.0));
}

TEST_CASE("probability of an uncut cell") {
  const CoreGeometry g(1.0);
  CHECK(prob_uncut(0.0, g) == 1.0);
  CHECK(prob_uncut(2.0, g) == 0.0);
  CHECK(prob_uncut(7.0, g) == 0.0);
  CHECK(prob_uncut(1.0, g) == doctest::Approx(0.2389084047).epsilon(1e-9));
  double prev = 1.0;
  for (int i = 1; i <= 100; ++i) {
    const double p = prob_uncut(0.02 * i, g);
    CHECK(p <= prev);
    prev = p;
  }
  CHECK_THROWS_AS(prob_uncut(-0.1, g), DomainError);
}

TEST_CASE("uncut probability matches random cell placement") {
  const double r = 1.3;
  const CoreGeometry g(r);
  std::mt19937_64 rng(2024);
  for (double y : {0.3, 1.0, 2.0, 2.5}) {
    int hits = 0;
    int inside = 0;
    while (hits < 200000) {
      const double x = oracle::geometric_overlap(y, r, rng);
      if (x < 0.0) continue;
      ++hits;
      if (x >= y - 1e-12) ++inside;
    }
    const double p = prob_uncut(y, g);
    const double se = std::sqrt(p * (1.0 - p) / hits);
    CHECK(std::abs(static_cast<double>(inside) / hits - p) < 4.0 * se + 1e-12);
  }
}

TEST_CASE("cut-length law matches random cell placement") {
  const double r = 1.0;
  const CoreGeometry g(r);
  std::mt19937_64 rng(99);
  for (double y : {1.2, 3.0}) {
    std::vector<double> cut;
    while (cut.size() < 100000) {
      const double x = oracle::geometric_overlap(y, r, rng);
      if (x >= 0.0 && x < y - 1e-12) cut.push_back(x);
    }
    const double top = std::min(y, 2.0 * r);
    const double total = cut_kernel_mass(top, y, g);
    CHECK(total == doctest::Approx(1.0 - prob_uncut(y, g)).epsilon(1e-12));
    for (double q : {0.2, 0.5, 0.8, 0.95}) {
      const double x = q * top;
      const double emp = static_cast<double>(std::count_if(cut.begin(), cut.end(),
                                                           [x](double v) { return v <= x; })) /
                         static_cast<double>(cut.size());
      const double model = cut_kernel_mass(x, y, g) / total;
      CHECK(std::abs(emp - model) < 4.0 * std::sqrt(model * (1.0 - model) / cut.size()) + 1e-3);
    }
  }
}

TEST_CASE("closed-form kernel mass equals numeric integration") {
  const CoreGeometry g(2.0);
  for (double y : {0.5, 2.0, 3.9, 4.0, 6.0, 30.0}) {
    const double top = std::min(y, 4.0);
    for (double frac : {0.1, 0.5, 0.9, 1.0}) {
      const double x = frac * top;
      const double numeric = oracle::kernel_integral(x, y, g);
      CHECK(cut_kernel_mass(x, y, g) == doctest::Approx(numeric).epsilon(1e-10));
    }
  }
}

TEST_CASE("kernel and uncut probability sum to one") {
  const double r = 2.5;
  const CoreGeometry g(r);
  for (int i = 1; i <= 200; ++i) {
    const double y = 2.0 * r * i / 200.0;
    const double mass = oracle::kernel_integral(y, y, g);
    CHECK(std::abs(prob_uncut(y, g) + mass - 1.0) < 1e-8);
  }
  for (double y : {2.1 * r, 5.0 * r, 20.0 * r}) {
    const double mass = oracle::kernel_integral(2.0 * r, y, g);
    CHECK(std::abs(mass - 1.0) < 1e-8);
  }
}

TEST_CASE("kernel domain checks") {
  const CoreGeometry g(1.0);
  CHECK_THROWS_AS(cut_kernel(0.0, 1.0, g), DomainError);
  CHECK_THROWS_AS(cut_kernel(1.0, 1.0, g), DomainError);
  CHECK_THROWS_AS(cut_kernel(2.0, 5.0, g), DomainError);
  CHECK_THROWS_AS(cut_kernel_mass(1.5, 1.0, g), DomainError);
  CHECK(cut_kernel_mass(0.0, 1.0, g) == 0.0);
}
