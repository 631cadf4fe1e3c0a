#pragma once

// Low-level dense kernels. Three tiers:
//   serial::*  loop-identical reference implementations, no pragmas
//   omp::*     the same loops with OpenMP row/pair parallelism; each output
//              element is produced by exactly one thread with a fixed inner
//              summation order, so results are bit-identical to serial::*
//              at any thread count
//   top level  production entry points; block products go through Eigen's
//              gemm for single-core throughput, everything else dispatches
//              to omp::*
// kernel_bench compares the tiers.

#include <cmath>

#include "rentropy/types.hpp"

namespace rentropy {

double kernel_value(const KernelSpec& spec, const double* x, const double* y, Index d);
// Validating overload: rejects mismatched dimensions and non-finite entries.
double kernel_value(const KernelSpec& spec, const Vec& x, const Vec& y);

// Normalized off-diagonal Gram entry. Every code path that materializes Gram
// sub-blocks goes through this so they agree bit-for-bit.
inline double gram_entry(double kernel_val, Index n, double kii, double kjj) {
  return kernel_val / (static_cast<double>(n) * std::sqrt(kii * kjj));
}

namespace kernels {

namespace serial {
void matvec(const RowMat& g, const double* x, double* y);
void apply_block(const RowMat& g, const ColMat& x, ColMat& y);
// Fills the normalized Gram: diagonal 1/n exactly, off-diagonal
// k(x_i,x_j) / (n * sqrt(k_ii * k_jj)) mirrored from the upper triangle.
void gram_fill(const SampleSet& data, const KernelSpec& spec, const Vec& diag_k, RowMat& out);
}  // namespace serial

namespace omp {
void matvec(const RowMat& g, const double* x, double* y);
void apply_block(const RowMat& g, const ColMat& x, ColMat& y);
void gram_fill(const SampleSet& data, const KernelSpec& spec, const Vec& diag_k, RowMat& out);
}  // namespace omp

void matvec(const RowMat& g, const Vec& x, Vec& y);
// y = g * x for a block of columns; y is resized to match.
void apply_block(const RowMat& g, const ColMat& x, ColMat& y);

}  // namespace kernels
}  // namespace rentropy
