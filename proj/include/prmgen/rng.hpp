#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace prmgen {

/// Seeded random stream shared by every generator in the library.
///
/// All draws are derived from a 64-bit Mersenne Twister through
/// platform-independent transforms, so a seed reproduces the same benchmark
/// on every compiler and standard library.
class Rng {
 public:
  using Engine = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform integer in [0, n). Requires n > 0.
  std::size_t index(std::size_t n);

  /// Poisson variate by sequential inversion of the CDF.
  std::size_t poisson(double lambda);

  /// Gamma(shape, 1) variate.
  double gamma(double shape);

  /// Point on the k-simplex drawn from a symmetric Dirichlet(alpha).
  std::vector<double> dirichlet(std::size_t k, double alpha);

  /// Index drawn with probability proportional to `weights`.
  /// Weights must be non-negative with a positive sum.
  std::size_t categorical(std::span<const double> weights);

  Engine& engine() { return engine_; }

 private:
  Engine engine_;
};

}  // namespace prmgen
