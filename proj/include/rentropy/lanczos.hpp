#pragma once

#include <cstdint>
#include <vector>

#include "rentropy/operators.hpp"
#include "rentropy/sketch.hpp"
#include "rentropy/types.hpp"

namespace rentropy {

struct LanczosFactorization {
  Vec diag;      // gamma_1..gamma_k
  Vec offdiag;   // beta_1..beta_{k-1}
  ColMat basis;  // n by k, orthonormal columns q_1..q_k
  bool breakdown = false;

  int steps() const { return static_cast<int>(diag.size()); }
};

// k-step Lanczos from q_1 = g/|g| with full (two-pass modified Gram-Schmidt)
// reorthogonalization at every step. Stops early with breakdown=true when
// beta_j < 1e-12 (invariant subspace captured).
LanczosFactorization lanczos_factorize(const SpectralOperator& op, const Vec& g, int m);

// First column of T^alpha for the symmetric tridiagonal T, via its
// eigendecomposition. Ritz values in [kPsdTol, 0) clamp to zero; lower values
// raise NotPsdError.
Vec tridiag_alpha_first_column(const Vec& diag, const Vec& offdiag, double alpha);

// Step count ceil( sqrt(kappa)/4 * ln(kappa^(alpha+1/2) / eps) ).
int lanczos_steps(double eps, double alpha, double kappa);

// Sketch count for the quadrature tail bound: ceil(24 ln(2/delta) / eps^2).
int quadrature_sketch_count(double epsilon, double delta);

// Per-column sqrt(n) * F_i where F_i = g_i' sum_k p_k q_k; each column runs
// its own factorization (they advance in lockstep for throughput but never
// interact). For Rademacher probes this equals the quadrature estimate of
// g_i' G^alpha g_i.
std::vector<double> lanczos_quadrature_terms(const SpectralOperator& op, double alpha, int m,
                                             const SketchBatch& batch);

// Rademacher-probe estimator: S = log2( (sqrt(n)/s) sum_i F_i ) / (1-alpha).
EntropyEstimate lanczos_entropy(const SpectralOperator& op, const EstimatorConfig& config);

}  // namespace rentropy
