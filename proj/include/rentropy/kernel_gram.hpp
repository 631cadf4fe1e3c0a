#pragma once

#include <vector>

#include "rentropy/types.hpp"

namespace rentropy {

// Throws std::invalid_argument on empty data or non-finite entries.
void validate_samples(const SampleSet& data);

// Normalized Gram of the sample set: G_ij = k(x_i,x_j) / (n sqrt(k_ii k_jj)).
// Diagonal is written as 1/n exactly. Polynomial kernels additionally require
// k_ii > 0 for every sample.
GramMatrix build_gram(const SampleSet& data, const KernelSpec& spec);

// Joint Gram of two or more variables: entrywise product renormalized to unit
// trace. Factors are multiplied in a content-canonical order, so any
// permutation of the argument list produces a bit-identical result.
GramMatrix hadamard_joint(const std::vector<const GramMatrix*>& grams);

}  // namespace rentropy
