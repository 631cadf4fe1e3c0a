#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "rentropy/exact_oracle.hpp"
#include "rentropy/kernel_gram.hpp"

using namespace rentropy;

namespace {
const std::vector<double> kAlphaGrid{0.5, 0.8, 1.2, 2.0, 3.0, 5.0, 8.0};
}

TEST_CASE("spectrum of the scaled identity is flat") {
  GramMatrix g;
  g.g = RowMat::Identity(4, 4) / 4.0;
  const Spectrum s = eigen_spectrum(g);
  REQUIRE(s.n() == 4);
  for (Index i = 0; i < 4; ++i) CHECK(s.lambda[i] == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("rank-1 gram from identical samples has spectrum (1, 0, ..., 0)") {
  SampleSet data;
  data.x = RowMat::Constant(8, 3, 1.7);
  const Spectrum s = eigen_spectrum(build_gram(data, testutil::gaussian_spec()));
  CHECK(s.lambda[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (Index i = 1; i < 8; ++i) {
    CHECK(s.lambda[i] >= 0.0);
    CHECK(s.lambda[i] <= 1e-12);
  }
}

TEST_CASE("two-point gram eigenvalues are 0.5 plus/minus the off-diagonal") {
  SampleSet data;
  data.x.resize(2, 1);
  data.x << 0.0, 2.0;
  const Spectrum s = eigen_spectrum(build_gram(data, testutil::gaussian_spec()));
  const double off = 0.5 * std::exp(-2.0);
  CHECK(s.lambda[0] == doctest::Approx(0.5 + off).epsilon(1e-12));
  CHECK(s.lambda[1] == doctest::Approx(0.5 - off).epsilon(1e-12));
  CHECK(s.lambda[0] == doctest::Approx(0.5 + 0.0676676).epsilon(1e-6));
}

TEST_CASE("spectrum computation rejects indefinite matrices") {
  GramMatrix bad;
  bad.g.resize(2, 2);
  bad.g << 0.5, 0.75, 0.75, 0.5;  // eigenvalues 1.25 and -0.25
  CHECK_THROWS_AS(eigen_spectrum(bad), NotPsdError);
}

TEST_CASE("entropy of the scaled identity is log2 n at every order") {
  GramMatrix g;
  g.g = RowMat::Identity(16, 16) / 16.0;
  const Spectrum s = eigen_spectrum(g);
  for (double alpha : kAlphaGrid)
    CHECK(exact_entropy(s, alpha) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("entropy of a rank-1 gram is zero at every order") {
  SampleSet data;
  data.x = RowMat::Constant(8, 3, -0.2);
  const GramMatrix g = build_gram(data, testutil::gaussian_spec());
  // alpha < 1 takes fractional powers of eigensolver round-off (~1e-15),
  // so the achievable floor is its square root, not 1e-12
  for (double alpha : kAlphaGrid) CHECK(std::abs(exact_entropy(g, alpha)) <= 1e-6);
}

TEST_CASE("entropy of the (0.75, 0.25) spectrum at order 2") {
  Spectrum s;
  s.lambda.resize(2);
  s.lambda << 0.75, 0.25;
  CHECK(exact_entropy(s, 2.0) == doctest::Approx(-std::log2(0.625)).epsilon(1e-14));
  CHECK(exact_entropy(s, 2.0) == doctest::Approx(0.678072).epsilon(1e-5));
  CHECK(spectrum_trace_power(s, 2.0) == doctest::Approx(0.625).epsilon(1e-15));
  CHECK(spectrum_trace_power(s, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("zero eigenvalues contribute nothing to trace powers") {
  Spectrum s;
  s.lambda.resize(3);
  s.lambda << 1.0, 0.0, 0.0;
  CHECK(spectrum_trace_power(s, 0.5) == 1.0);
  CHECK(exact_entropy(s, 0.5) == 0.0);
}

TEST_CASE("order parameter validation") {
  GramMatrix g;
  g.g = RowMat::Identity(4, 4) / 4.0;
  CHECK_THROWS_AS(exact_entropy(g, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(exact_entropy(g, 1.0 + 1e-7), std::invalid_argument);
  CHECK_THROWS_AS(exact_entropy(g, 1.0 - 1e-7), std::invalid_argument);
  CHECK_THROWS_AS(exact_entropy(g, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(exact_entropy(g, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(exact_entropy(g, std::nan("")), std::invalid_argument);
}

TEST_CASE("self mutual information of the scaled identity is log2 n") {
  GramMatrix g;
  g.g = RowMat::Identity(16, 16) / 16.0;
  for (double alpha : {0.5, 2.0, 5.0})
    CHECK(exact_mutual_information({&g}, g, alpha) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("self mutual information matches the literal 2S - S_joint composition") {
  const GramMatrix g = testutil::mixture_gram(32, 3, 7);
  for (double alpha : {0.5, 2.0, 3.0}) {
    const double composed =
        2.0 * exact_entropy(g, alpha) - exact_entropy(hadamard_joint({&g, &g}), alpha);
    CHECK(exact_mutual_information({&g}, g, alpha) == doctest::Approx(composed).epsilon(1e-12));
  }
}

TEST_CASE("pairwise total correlation equals pairwise mutual information") {
  const GramMatrix a = testutil::mixture_gram(32, 3, 1);
  const GramMatrix b = testutil::mixture_gram(32, 2, 2, 0.7);
  for (double alpha : kAlphaGrid) {
    CHECK(exact_total_correlation({&a, &b}, alpha) ==
          doctest::Approx(exact_mutual_information({&a}, b, alpha)).epsilon(1e-12));
  }
}

TEST_CASE("mutual information reproduced by brute-force eigendecomposition of the joint") {
  const GramMatrix a = testutil::mixture_gram(32, 4, 11);
  const GramMatrix b =
      build_gram(testutil::random_samples(32, 3, 12), testutil::gaussian_spec(1.3));
  const double alpha = 2.5;

  // independent route: renormalized entrywise product, dense eigensolve,
  // entropy summed by hand
  RowMat h = (a.g.array() * b.g.array()).matrix();
  h /= h.trace();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  double trace_pow = 0.0;
  for (Index i = 0; i < 32; ++i) {
    const double lam = std::max(es.eigenvalues()[i], 0.0);
    if (lam > 0.0) trace_pow += std::pow(lam, alpha);
  }
  const double joint_bits = std::log2(trace_pow) / (1.0 - alpha);
  const double expected =
      exact_entropy(a, alpha) + exact_entropy(b, alpha) - joint_bits;

  CHECK(exact_mutual_information({&a}, b, alpha) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("entropy is non-increasing in alpha and bounded by [0, log2 n]") {
  std::mt19937_64 pick(99);
  std::uniform_int_distribution<int> pick_n(8, 48);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = pick_n(pick);
    const GramMatrix g =
        testutil::mixture_gram(n, 1 + trial % 5, 300 + static_cast<std::uint64_t>(trial));
    const Spectrum s = eigen_spectrum(g);
    double prev = std::numeric_limits<double>::infinity();
    for (double alpha : kAlphaGrid) {
      const double bits = exact_entropy(s, alpha);
      REQUIRE(bits >= 0.0);
      REQUIRE(bits <= std::log2(static_cast<double>(n)) + 1e-12);
      REQUIRE(bits <= prev + 1e-12);
      prev = bits;
    }
  }
}

TEST_CASE("entropy is invariant under permutation similarity") {
  const GramMatrix g = testutil::mixture_gram(24, 3, 21);
  std::vector<Index> p(24);
  std::iota(p.begin(), p.end(), Index{0});
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(p.begin(), p.end(), rng);
    GramMatrix permuted;
    permuted.g.resize(24, 24);
    for (Index i = 0; i < 24; ++i)
      for (Index j = 0; j < 24; ++j) permuted.g(p[i], p[j]) = g.g(i, j);
    for (double alpha : {0.5, 2.0, 8.0})
      CHECK(exact_entropy(permuted, alpha) ==
            doctest::Approx(exact_entropy(g, alpha)).epsilon(1e-10));
  }
}
