#pragma once

#include <cstdint>
#include <vector>

#include "rentropy/operators.hpp"
#include "rentropy/types.hpp"

namespace rentropy {

enum class Probe { Gaussian, Rademacher };

struct SketchBatch {
  ColMat vectors;  // n by s, one probe per column
  Probe distribution = Probe::Gaussian;
  std::uint64_t seed = 0;

  Index n() const { return vectors.rows(); }
  int s() const { return static_cast<int>(vectors.cols()); }
};

// Column i is drawn from an independent stream keyed by (seed, i), so the
// batch for a smaller s is a prefix of the batch for a larger s and contents
// never depend on thread count.
SketchBatch sample_sketch(Index n, int s, Probe distribution, std::uint64_t seed);

// Per-column g_i' A^power g_i, evaluated as `power` repeated applications.
std::vector<double> quadratic_forms(const SpectralOperator& op, int power,
                                    const SketchBatch& batch);

// Mean of quadratic_forms in fixed column order: the Hutchinson estimate of
// tr(A^power) for unit-variance probes.
double hutchinson_trace(const SpectralOperator& op, int power, const SketchBatch& batch);

// Sketch count making the Hutchinson trace estimate epsilon-accurate with
// probability 1-delta: ceil(8 ln(2/delta) / epsilon^2).
int hutchinson_sketch_count(double epsilon, double delta);

struct PowerResult {
  double lambda = 0.0;  // inflated by (1 + 1e-6); upper-bounds the spectrum
  int iters = 0;
  bool converged = false;
};

// Dominant eigenvalue by power iteration. Stops when successive Rayleigh
// quotients differ by < tol (or immediately on an exact eigenvector), up to
// max_iters. A collapsing iterate is restarted with a fresh start vector at
// most 3 times, then raises NumericError.
PowerResult power_iteration(const SpectralOperator& op, int max_iters = 1000, double tol = 1e-8,
                            std::uint64_t seed = 0);

// Integer-order estimator: S = log2(mean_i g_i' G^alpha g_i) / (1 - alpha)
// with Gaussian probes and alpha an integer >= 2.
EntropyEstimate integer_entropy(const SpectralOperator& op, const EstimatorConfig& config);

}  // namespace rentropy
