#include "fiberld/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fiberld/errors.hpp"

namespace fiberld {
namespace {

constexpr std::size_t kMinAttemptsForRateCheck = 100000;
constexpr double kMinAcceptance = 1e-4;

double draw_population(const PopulationParams& params, Rng& rng) {
  if (const auto* c = std::get_if<Component>(&params)) return draw_component(*c, rng);
  const auto& mp = std::get<MixtureParams>(params);
  const bool fines = rng.uniform() < mp.eps;
  return draw_component(fines ? mp.fines : mp.fibers, rng);
}

template <class Accept>
std::vector<double> rejection(const SimSpec& spec, Accept accept_prob, RejectionStats* stats) {
  Rng rng(spec.seed);
  std::vector<double> out;
  out.reserve(spec.n);
  std::size_t attempts = 0;
  while (out.size() < spec.n) {
    const double y = draw_population(spec.params, rng);
    ++attempts;
    if (rng.uniform() < accept_prob(y)) out.push_back(y);
    if (attempts >= kMinAttemptsForRateCheck &&
        static_cast<double>(out.size()) < kMinAcceptance * static_cast<double>(attempts)) {
      throw SamplingError(
          "rejection sampler acceptance rate is below 1e-4; review the parameters against the "
          "core radius");
    }
  }
  if (stats) *stats = {attempts, out.size()};
  return out;
}

}  // namespace

void SimSpec::validate() const {
  if (n == 0) throw DomainError("sample size must be at least 1");
  if (const auto* mp = std::get_if<MixtureParams>(&params)) {
    mp->validate();
    if (scale == Scale::V) {
      throw DomainError("the V scale needs single-component fiber parameters");
    }
  }
}

double draw_component(const Component& c, Rng& rng) {
  if (c.family() == Family::ggamma) {
    const auto& p = c.ggd();
    return p.b * std::pow(rng.gamma(p.k), 1.0 / p.d);
  }
  const auto& p = c.logn();
  return std::exp(p.mu + p.sigma * rng.normal());
}

double draw_observed(double y, const CoreGeometry& geom, Rng& rng) {
  const double p = prob_uncut(y, geom);
  if (rng.uniform() < p) return y;
  const double target = rng.uniform() * (1.0 - p);
  double lo = 0.0;
  double hi = std::min(y, geom.diameter());
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (cut_kernel_mass(mid, y, geom) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double x = 0.5 * (lo + hi);
  return std::clamp(x, std::nextafter(0.0, 1.0), std::nextafter(geom.diameter(), 0.0));
}

std::vector<double> sample_y(const SimSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<double> out(spec.n);
  for (auto& v : out) v = draw_population(spec.params, rng);
  return out;
}

std::vector<double> sample_w(const SimSpec& spec, RejectionStats* stats) {
  spec.validate();
  const double pr = std::numbers::pi * spec.geom.radius();
  return rejection(spec, [pr](double y) { return pr / (pr + 2.0 * y); }, stats);
}

std::vector<double> sample_v(const SimSpec& spec, RejectionStats* stats) {
  spec.validate();
  if (std::holds_alternative<MixtureParams>(spec.params)) {
    throw DomainError("the V scale needs single-component fiber parameters");
  }
  const CoreGeometry geom = spec.geom;
  return rejection(spec, [geom](double y) { return prob_uncut(y, geom); }, stats);
}

std::vector<double> sample_x(const SimSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<double> out(spec.n);
  for (auto& v : out) v = draw_observed(draw_population(spec.params, rng), spec.geom, rng);
  return out;
}

std::vector<double> sample(const SimSpec& spec) {
  switch (spec.scale) {
    case Scale::W:
      return sample_w(spec);
    case Scale::Y:
      return sample_y(spec);
    case Scale::X:
      return sample_x(spec);
    case Scale::V:
      return sample_v(spec);
  }
  return {};
}

}  // namespace fiberld
