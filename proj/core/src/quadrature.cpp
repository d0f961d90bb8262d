#include "fiberld/quadrature.hpp"

#include <numbers>

namespace fiberld {

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || !(tail_cutoff > 0.0)) {
    throw DomainError("quadrature tolerances must be positive");
  }
  if (max_subdivisions < 10) throw DomainError("max_subdivisions must be at least 10");
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg) {
  cfg.validate();
  auto wrapped = [&](double x) { return std::array<double, 1>{f(x)}; };
  return integrate_vector<1>(wrapped, a, b, cfg).value[0];
}

double integrate_sqrt_endpoints(const std::function<double(double)>& f, double a, double b,
                                const QuadratureConfig& cfg) {
  cfg.validate();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  auto wrapped = [&](double phi) {
    return std::array<double, 1>{f(c + h * std::sin(phi)) * h * std::cos(phi)};
  };
  constexpr double kHalfPi = 0.5 * std::numbers::pi;
  return integrate_vector<1>(wrapped, -kHalfPi, kHalfPi, cfg, 2).value[0];
}

}  // namespace fiberld
