#include "fiberld/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "fiberld/errors.hpp"

namespace fiberld::special {
namespace {

void require_positive(double k, const char* name) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw DomainError(std::string(name) + ": argument must be positive and finite, got " +
                      std::to_string(k));
  }
}

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Series valid for k >= 0.5.
double lanczos_log_gamma(double k) {
  const double z = k - 1.0;
  double sum = kLanczosCoef[0];
  for (std::size_t i = 1; i < kLanczosCoef.size(); ++i) {
    sum += kLanczosCoef[i] / (z + static_cast<double>(i));
  }
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

}  // namespace

double log_gamma(double k) {
  require_positive(k, "log_gamma");
  if (k == 1.0 || k == 2.0) return 0.0;
  if (k < 0.5) {
    // ln Gamma(k) = ln Gamma(k + 1) - ln k
    return lanczos_log_gamma(k + 1.0) - std::log(k);
  }
  return lanczos_log_gamma(k);
}

double digamma(double k) {
  require_positive(k, "digamma");
  double shift = 0.0;
  double x = k;
  while (x < 10.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  // Asymptotic expansion in 1/x^2 with Bernoulli coefficients B_2n / (2n).
  const double inv2 = 1.0 / (x * x);
  const double series =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 -
                                      inv2 * (1.0 / 132.0 -
                                              inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
  return shift + std::log(x) - 0.5 / x - series;
}

double trigamma(double k) {
  require_positive(k, "trigamma");
  double shift = 0.0;
  double x = k;
  while (x < 10.0) {
    shift += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv * inv2 *
      (1.0 / 6.0 -
       inv2 * (1.0 / 30.0 -
               inv2 * (1.0 / 42.0 -
                       inv2 * (1.0 / 30.0 -
                               inv2 * (5.0 / 66.0 - inv2 * (691.0 / 2730.0 - inv2 * 7.0 / 6.0))))));
  return shift + inv + 0.5 * inv2 + series;
}

}  // namespace fiberld::special
