#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "rentropy/exact_oracle.hpp"
#include "rentropy/sketch.hpp"

using namespace rentropy;

TEST_CASE("rademacher sketch entries are plus or minus one") {
  const SketchBatch batch = sample_sketch(4, 2, Probe::Rademacher, 7);
  REQUIRE(batch.n() == 4);
  REQUIRE(batch.s() == 2);
  CHECK((batch.vectors.array().abs() == 1.0).all());
}

TEST_CASE("gaussian sketch mean over 1e5 entries is near zero") {
  const SketchBatch batch = sample_sketch(1000, 100, Probe::Gaussian, 42);
  const double m = batch.vectors.mean();
  CHECK(std::abs(m) <= 0.02);
}

TEST_CASE("sketches are deterministic and column streams are prefix-stable") {
  const SketchBatch a = sample_sketch(64, 16, Probe::Gaussian, 9);
  const SketchBatch b = sample_sketch(64, 16, Probe::Gaussian, 9);
  CHECK((a.vectors.array() == b.vectors.array()).all());

  // column i depends only on (seed, i), so a wider batch extends a narrower
  // one without disturbing shared columns
  const SketchBatch wide = sample_sketch(64, 40, Probe::Gaussian, 9);
  CHECK((wide.vectors.leftCols(16).array() == a.vectors.array()).all());

  const SketchBatch other = sample_sketch(64, 16, Probe::Gaussian, 10);
  CHECK_FALSE((other.vectors.array() == a.vectors.array()).all());
}

TEST_CASE("hutchinson on a scaled identity returns c times the mean squared norm") {
  const double c = 0.3;
  testutil::DiagonalOperator op(Vec::Constant(50, c));
  const SketchBatch batch = sample_sketch(50, 2000, Probe::Gaussian, 3);
  const double estimate = hutchinson_trace(op, 1, batch);

  const double mean_sq = batch.vectors.colwise().squaredNorm().mean();
  CHECK(estimate == doctest::Approx(c * mean_sq).epsilon(1e-12));
  // large-s limit: c * n
  CHECK(estimate == doctest::Approx(c * 50.0).epsilon(0.05));
}

TEST_CASE("hutchinson trace of the squared gram is within 5 percent at s=1e4") {
  const GramMatrix g = testutil::mixture_gram(16, 3, 17);
  const double exact = spectrum_trace_power(eigen_spectrum(g), 2.0);
  DenseOperator op(g);
  const SketchBatch batch = sample_sketch(16, 10000, Probe::Gaussian, 5);
  CHECK(hutchinson_trace(op, 2, batch) == doctest::Approx(exact).epsilon(0.05));
}

TEST_CASE("hutchinson estimates are unbiased across 200 seeds") {
  const GramMatrix g = testutil::mixture_gram(32, 4, 23);
  DenseOperator op(g);
  std::vector<double> estimates;
  for (int seed = 0; seed < 200; ++seed) {
    const SketchBatch batch = sample_sketch(32, 8, Probe::Gaussian, 1234 + seed);
    estimates.push_back(hutchinson_trace(op, 1, batch));
  }
  const double bias = testutil::mean(estimates) - 1.0;  // gram trace is exactly 1
  CHECK(std::abs(bias) <= 2.0 * testutil::sample_std(estimates) / std::sqrt(200.0));
}

TEST_CASE("hutchinson is exactly linear in the operator") {
  const GramMatrix g = testutil::mixture_gram(24, 3, 31);
  GramMatrix doubled;
  doubled.g = 2.0 * g.g;
  DenseOperator op(g), op2(doubled);
  const SketchBatch batch = sample_sketch(24, 32, Probe::Gaussian, 8);
  CHECK(hutchinson_trace(op2, 1, batch) == 2.0 * hutchinson_trace(op, 1, batch));
}

TEST_CASE("sketch and trace argument validation") {
  CHECK_THROWS_AS(sample_sketch(0, 4, Probe::Gaussian, 0), std::invalid_argument);
  CHECK_THROWS_AS(sample_sketch(4, 0, Probe::Gaussian, 0), std::invalid_argument);

  testutil::DiagonalOperator op(Vec::Constant(8, 0.125));
  const SketchBatch batch = sample_sketch(4, 2, Probe::Gaussian, 0);
  CHECK_THROWS_AS(hutchinson_trace(op, 1, batch), std::invalid_argument);
  const SketchBatch ok = sample_sketch(8, 2, Probe::Gaussian, 0);
  CHECK_THROWS_AS(hutchinson_trace(op, 0, ok), std::invalid_argument);
}

TEST_CASE("power iteration resolves a separated diagonal spectrum") {
  Vec lambda(3);
  lambda << 1.0, 0.1, 0.01;
  testutil::DiagonalOperator op(lambda);
  const PowerResult res = power_iteration(op);
  CHECK(res.converged);
  // undo the documented (1 + 1e-6) inflation before comparing
  CHECK(std::abs(res.lambda / (1.0 + 1e-6) - 1.0) <= 1e-6);
  CHECK(res.lambda >= 1.0 - 1e-8);
}

TEST_CASE("power iteration on the scaled identity is exact after one step") {
  GramMatrix g;
  g.g = RowMat::Identity(16, 16) / 16.0;
  DenseOperator op(g);
  const PowerResult res = power_iteration(op, 1);
  CHECK(std::abs(res.lambda / (1.0 + 1e-6) - 1.0 / 16.0) <= 1e-9);
}

TEST_CASE("power iteration matches the oracle on a random gram") {
  const GramMatrix g = testutil::mixture_gram(64, 3, 41);
  const double exact = eigen_spectrum(g).lambda[0];
  DenseOperator op(g);
  const PowerResult res = power_iteration(op, 500);
  CHECK(res.iters <= 500);
  CHECK(std::abs(res.lambda / (1.0 + 1e-6) - exact) <= 1e-4);
  // the inflated value upper-bounds the spectrum
  CHECK(res.lambda >= exact * (1.0 - 1e-7));
}

TEST_CASE("integer estimator recovers log2 n on the scaled identity") {
  testutil::DiagonalOperator op(Vec::Constant(1024, 1.0 / 1024.0));
  EstimatorConfig config;
  config.alpha = 2.0;
  config.sketches = 100;
  config.seed = 0;
  const EntropyEstimate est = integer_entropy(op, config);
  CHECK(est.bits == doctest::Approx(10.0).epsilon(1e-3));
  CHECK(std::abs(est.bits - 10.0) <= 0.01);
  CHECK(est.method == "integer");
  CHECK(est.sketches == 100);
}

TEST_CASE("integer estimator is deterministic given the config") {
  const GramMatrix g = testutil::mixture_gram(64, 5, 2);
  DenseOperator op(g);
  EstimatorConfig config;
  config.alpha = 3.0;
  config.sketches = 50;
  config.seed = 77;
  const EntropyEstimate a = integer_entropy(op, config);
  const EntropyEstimate b = integer_entropy(op, config);
  CHECK(a.bits == b.bits);
}

TEST_CASE("integer estimator rejects fractional and small orders") {
  testutil::DiagonalOperator op(Vec::Constant(8, 0.125));
  EstimatorConfig config;
  config.alpha = 2.5;
  CHECK_THROWS_AS(integer_entropy(op, config), std::invalid_argument);
  config.alpha = 1.0;
  CHECK_THROWS_AS(integer_entropy(op, config), std::invalid_argument);
  config.alpha = 0.0;
  CHECK_THROWS_AS(integer_entropy(op, config), std::invalid_argument);
}

TEST_CASE("integer estimator MRE at s=200 stays under 1e-2, improving with alpha") {
  const GramMatrix g = testutil::mixture_gram(256, 10, 100);
  const Spectrum spectrum = eigen_spectrum(g);
  DenseOperator op(g);

  double err_alpha2 = 0.0;
  for (double alpha : {2.0, 3.0, 5.0, 8.0}) {
    const double exact = exact_entropy(spectrum, alpha);
    const double mre = testutil::mre_over_seeds(100, exact, [&](int seed) {
      EstimatorConfig config;
      config.alpha = alpha;
      config.sketches = 200;
      config.seed = static_cast<std::uint64_t>(seed);
      return integer_entropy(op, config).bits;
    });
    CHECK(mre <= 1e-2);
    if (alpha == 2.0) err_alpha2 = mre;
    if (alpha == 8.0) CHECK(mre <= err_alpha2);
  }
}

TEST_CASE("sketch count formula and entropy bound coverage at (0.3, 0.1)") {
  CHECK(hutchinson_sketch_count(0.3, 0.1) == 267);
  CHECK(hutchinson_sketch_count(0.3, 0.05) == 328);
  CHECK_THROWS_AS(hutchinson_sketch_count(0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(hutchinson_sketch_count(0.3, 1.0), std::invalid_argument);

  const double epsilon = 0.3, delta = 0.1, alpha = 2.0;
  const GramMatrix g = testutil::mixture_gram(64, 5, 55);
  const double exact = exact_entropy(g, alpha);
  DenseOperator op(g);
  const int s = hutchinson_sketch_count(epsilon, delta);
  const double bound = std::abs(std::log2(1.0 - epsilon) / (1.0 - alpha));

  int violations = 0;
  for (int seed = 0; seed < 500; ++seed) {
    EstimatorConfig config;
    config.alpha = alpha;
    config.sketches = s;
    config.seed = 10000 + static_cast<std::uint64_t>(seed);
    if (std::abs(integer_entropy(op, config).bits - exact) > bound) ++violations;
  }
  CHECK(violations <= static_cast<int>((delta + 0.05) * 500));
}
