#include "prmgen/rng.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace prmgen {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Rng::index: empty range");
  boost::random::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(engine_);
}

std::size_t Rng::poisson(double lambda) {
  if (!(lambda > 0.0) || lambda > 500.0) {
    throw std::invalid_argument("Rng::poisson: lambda must be in (0, 500]");
  }
  const double u = uniform();
  double p = std::exp(-lambda);
  double cdf = p;
  std::size_t x = 0;
  // The cap only matters when u lands in the last few ulps below 1.
  while (u > cdf && x < 10000) {
    ++x;
    p *= lambda / static_cast<double>(x);
    cdf += p;
  }
  return x;
}

double Rng::gamma(double shape) {
  boost::random::gamma_distribution<double> dist(shape, 1.0);
  return dist(engine_);
}

std::vector<double> Rng::dirichlet(std::size_t k, double alpha) {
  if (k == 0) throw std::invalid_argument("Rng::dirichlet: k must be positive");
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("Rng::dirichlet: alpha must be positive");
  }
  std::vector<double> out(k);
  double sum = 0.0;
  for (auto& x : out) {
    x = gamma(alpha);
    sum += x;
  }
  if (!(sum > 0.0)) {
    // Every gamma draw underflowed (tiny alpha): the limit is a vertex.
    std::fill(out.begin(), out.end(), 0.0);
    out[index(k)] = 1.0;
    return out;
  }
  for (auto& x : out) x /= sum;
  return out;
}

std::size_t Rng::categorical(std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (weights.empty() || !(total > 0.0)) {
    throw std::invalid_argument("Rng::categorical: weights must have positive mass");
  }
  const double target = uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

}  // namespace prmgen
