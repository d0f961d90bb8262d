#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fiberld/densities.hpp"
#include "fiberld/geometry.hpp"
#include "fiberld/random.hpp"
#include "fiberld/scales.hpp"

namespace fiberld {

struct SimSpec {
  Scale scale = Scale::Y;
  PopulationParams params = Component(GgdParams{1.0, 1.0, 1.0});
  CoreGeometry geom{1.0};
  std::size_t n = 1;
  std::uint64_t seed = 1;

  /// Throws DomainError for n = 0 or mixture parameters on the V scale.
  void validate() const;
};

/// Rejection sampling accepted fewer than one draw in ten thousand.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Proposal draws made by a rejection sampler.
struct RejectionStats {
  std::size_t proposals = 0;
  std::size_t accepted = 0;
};

std::vector<double> sample_y(const SimSpec& spec);
std::vector<double> sample_w(const SimSpec& spec, RejectionStats* stats = nullptr);
std::vector<double> sample_v(const SimSpec& spec, RejectionStats* stats = nullptr);
std::vector<double> sample_x(const SimSpec& spec);

/// Dispatches on spec.scale.
std::vector<double> sample(const SimSpec& spec);

/// One core-scale draw from a component.
double draw_component(const Component& c, Rng& rng);

/// One observed length given the true length y: y itself when the cell is
/// uncut, otherwise a draw from the normalized cut kernel.
double draw_observed(double y, const CoreGeometry& geom, Rng& rng);

}  // namespace fiberld
