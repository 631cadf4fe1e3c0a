#pragma once

// Shared test utilities: error metrics, rank correlation, synthetic
// operators with prescribed spectra, and mixture-data Gram builders.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rentropy/exact_oracle.hpp"
#include "rentropy/kernel_gram.hpp"
#include "rentropy/mixture.hpp"
#include "rentropy/operators.hpp"
#include "rentropy/rng.hpp"
#include "rentropy/types.hpp"

namespace testutil {

inline double rel_err(double estimate, double exact) {
  return std::abs(estimate - exact) / std::abs(exact);
}

inline double mean(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

inline double sample_std(const std::vector<double>& v) {
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

// 1-based ranks; ties take the average of the positions they span.
inline std::vector<double> average_ranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = shared;
    i = j + 1;
  }
  return ranks;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = mean(a), mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  return pearson(average_ranks(a), average_ranks(b));
}

// Operator with a prescribed spectrum; lets tests control kappa exactly.
class DiagonalOperator final : public rentropy::SpectralOperator {
 public:
  explicit DiagonalOperator(rentropy::Vec lambda) : lambda_(std::move(lambda)) {}

  rentropy::Index order() const override { return lambda_.size(); }
  void apply(const rentropy::Vec& x, rentropy::Vec& y) const override {
    y = lambda_.cwiseProduct(x);
  }
  void apply_block(const rentropy::ColMat& x, rentropy::ColMat& y) const override {
    y = lambda_.asDiagonal() * x;
  }
  const rentropy::Vec& lambda() const { return lambda_; }

 private:
  rentropy::Vec lambda_;
};

// Unit-trace geometric spectrum with lambda_1/lambda_n = kappa, sorted
// non-increasing.
inline rentropy::Vec geometric_spectrum(rentropy::Index n, double kappa) {
  rentropy::Vec lam(n);
  const double rho = std::pow(1.0 / kappa, 1.0 / static_cast<double>(n - 1));
  double p = 1.0;
  for (rentropy::Index i = 0; i < n; ++i) {
    lam[i] = p;
    p *= rho;
  }
  lam /= lam.sum();
  return lam;
}

// Symmetric matrix Q diag(lambda) Q' with Q drawn from the QR of a gaussian
// matrix. Same spectrum as `lambda` but dense, so sketch probes see a
// non-trivial eigenbasis.
inline rentropy::RowMat rotated_spectrum(const rentropy::Vec& lambda, std::uint64_t seed) {
  const rentropy::Index n = lambda.size();
  auto rng = rentropy::stream_rng(seed, 0x726f746174650000ULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  rentropy::ColMat a(n, n);
  for (rentropy::Index j = 0; j < n; ++j)
    for (rentropy::Index i = 0; i < n; ++i) a(i, j) = normal(rng);
  Eigen::HouseholderQR<rentropy::ColMat> qr(a);
  const rentropy::ColMat q = qr.householderQ() * rentropy::ColMat::Identity(n, n);
  const rentropy::ColMat m = q * lambda.asDiagonal() * q.transpose();
  rentropy::RowMat sym = m;
  sym = 0.5 * (sym + rentropy::RowMat(sym.transpose()));
  return sym;
}

inline rentropy::KernelSpec gaussian_spec(double sigma = 1.0) {
  rentropy::KernelSpec spec;
  spec.family = rentropy::KernelFamily::Gaussian;
  spec.sigma = sigma;
  return spec;
}

inline rentropy::KernelSpec polynomial_spec(double shift = 1.0, int degree = 2) {
  rentropy::KernelSpec spec;
  spec.family = rentropy::KernelFamily::Polynomial;
  spec.shift = shift;
  spec.degree = degree;
  return spec;
}

inline rentropy::GramMatrix mixture_gram(rentropy::Index n, rentropy::Index d,
                                         std::uint64_t seed, double sigma = 1.0) {
  return rentropy::build_gram(rentropy::generate_mixture(n, d, seed), gaussian_spec(sigma));
}

// Random sample set with N(0,1) features, for property sweeps.
inline rentropy::SampleSet random_samples(rentropy::Index n, rentropy::Index d,
                                          std::uint64_t seed) {
  auto rng = rentropy::stream_rng(seed, 0x73616d706c650000ULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  rentropy::SampleSet data;
  data.x.resize(n, d);
  for (rentropy::Index i = 0; i < n; ++i)
    for (rentropy::Index j = 0; j < d; ++j) data.x(i, j) = normal(rng);
  return data;
}

template <class F>
inline double mre_over_seeds(int seeds, double exact, F&& estimate_for_seed) {
  std::vector<double> errs;
  errs.reserve(static_cast<std::size_t>(seeds));
  for (int s = 0; s < seeds; ++s) errs.push_back(rel_err(estimate_for_seed(s), exact));
  return mean(errs);
}

}  // namespace testutil
