#include "rentropy/mixture.hpp"

#include <random>
#include <stdexcept>

#include "rentropy/rng.hpp"

namespace rentropy {

SampleSet generate_mixture(Index n, Index d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("mixture needs n >= 1 and d >= 1");
  auto rng = stream_rng(seed, kStreamMixture);
  std::bernoulli_distribution component(0.5);
  std::normal_distribution<double> normal(0.0, 1.0);
  SampleSet data;
  data.x.resize(n, d);
  for (Index i = 0; i < n; ++i) {
    const double mean = component(rng) ? 1.0 : -1.0;
    for (Index j = 0; j < d; ++j) data.x(i, j) = mean + normal(rng);
  }
  return data;
}

}  // namespace rentropy
