#pragma once

#include <vector>

#include "rentropy/types.hpp"

namespace rentropy {

// Full symmetric eigendecomposition of the Gram, eigenvalues only, sorted
// non-increasing. Values in [kPsdTol, 0) clamp to zero; anything lower throws
// NotPsdError.
Spectrum eigen_spectrum(const GramMatrix& gram);

// S_alpha = log2(sum lambda_i^alpha) / (1 - alpha), with 0^alpha = 0.
// Result is clamped into [0, log2 n] only within a 1e-9 round-off band.
double exact_entropy(const Spectrum& spec, double alpha);
double exact_entropy(const GramMatrix& gram, double alpha);

// sum lambda_i^p; shared by trace-estimator oracles.
double spectrum_trace_power(const Spectrum& spec, double p);

// S(joint(xs)) + S(y) - S(joint(xs, y)).
double exact_mutual_information(const std::vector<const GramMatrix*>& xs, const GramMatrix& y,
                                double alpha);

// sum_i S(x_i) - S(joint(all)).
double exact_total_correlation(const std::vector<const GramMatrix*>& vars, double alpha);

}  // namespace rentropy
