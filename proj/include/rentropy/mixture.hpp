#pragma once

#include <cstdint>

#include "rentropy/types.hpp"

namespace rentropy {

// Equal-weight mixture of N(-1, I_d) and N(+1, I_d); the component means are
// the all-(-1) and all-(+1) vectors. Deterministic given seed.
SampleSet generate_mixture(Index n, Index d, std::uint64_t seed);

}  // namespace rentropy
