#pragma once

#include <cstdint>
#include <random>

namespace fiberld {

std::uint64_t splitmix64(std::uint64_t x);

/// Seeded random stream. The engine is std::mt19937_64 seeded with
/// splitmix64(seed); the variate transforms are implemented here rather than
/// taken from <random> so that streams are identical across standard
/// libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Marsaglia polar method).
  double normal();
  /// Gamma(shape, 1) (Marsaglia and Tsang, with the u^{1/k} boost for k < 1).
  double gamma(double shape);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fiberld
