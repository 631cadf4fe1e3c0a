#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "rentropy/exact_oracle.hpp"
#include "rentropy/info_measures.hpp"
#include "rentropy/kernel_gram.hpp"

using namespace rentropy;

namespace {

Variable make_variable(const RowMat& x, double sigma = 1.0) {
  Variable v;
  v.samples.x = x;
  v.kernel = testutil::gaussian_spec(sigma);
  return v;
}

// samples so far apart that every off-diagonal gaussian kernel value
// underflows to exactly zero, making the Gram exactly I/n
Variable isolated_points(Index n) {
  RowMat x(n, 1);
  for (Index i = 0; i < n; ++i) x(i, 0) = 4000.0 * static_cast<double>(i);
  return make_variable(x);
}

MeasureRequest exact_request(double alpha) {
  MeasureRequest req;
  req.method = Method::Exact;
  req.config.alpha = alpha;
  return req;
}

}  // namespace

TEST_CASE("the exact backend is not dispatchable as an operator estimator") {
  Vec lambda = Vec::Constant(4, 0.25);
  testutil::DiagonalOperator op(lambda);
  EstimatorConfig config;
  CHECK_THROWS_AS(operator_entropy(op, Method::Exact, config), std::invalid_argument);
}

TEST_CASE("self-information of a maximally spread variable is log2 n") {
  MeasureRequest req = exact_request(1.5);
  req.variables = {isolated_points(16)};
  req.target = isolated_points(16);
  const EntropyEstimate est = mutual_information(req);
  // joint of I/n with itself renormalizes back to I/n, so MI = 2log2n - log2n
  CHECK(est.bits == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(est.method == "exact");
  REQUIRE(est.terms.size() == 3);
  CHECK(est.terms[0].label == "variables");
  CHECK(est.terms[1].label == "target");
  CHECK(est.terms[2].label == "joint");
}

TEST_CASE("chebyshev backend tracks the exact backend on a correlated pair") {
  const RowMat base = testutil::random_samples(128, 3, 91).x;
  RowMat noisy = base + 0.3 * testutil::random_samples(128, 3, 92).x;

  MeasureRequest req = exact_request(1.5);
  req.variables = {make_variable(base)};
  req.target = make_variable(noisy);
  const double exact = mutual_information(req).bits;
  CHECK(exact > 0.2);  // the pair is genuinely dependent

  req.method = Method::Chebyshev;
  req.config.degree = 30;
  req.config.sketches = 4000;
  const double mre = testutil::mre_over_seeds(10, exact, [&](int seed) {
    req.config.seed = static_cast<std::uint64_t>(seed);
    return mutual_information(req).bits;
  });
  CHECK(mre <= 2e-2);
}

TEST_CASE("variable ordering never changes the result, dense or block low-rank") {
  const Variable a = make_variable(testutil::random_samples(96, 2, 11).x, 1.0);
  const Variable b = make_variable(testutil::random_samples(96, 2, 12).x, 1.3);
  const Variable c = make_variable(testutil::random_samples(96, 2, 13).x, 0.8);
  const Variable y = make_variable(testutil::random_samples(96, 1, 14).x);

  MeasureRequest req;
  req.method = Method::Chebyshev;
  req.config.alpha = 1.5;
  req.config.degree = 20;
  req.config.sketches = 60;
  req.config.seed = 21;
  req.variables = {a, b, c};
  req.target = y;
  const double forward = mutual_information(req).bits;
  req.variables = {c, a, b};
  const double shuffled = mutual_information(req).bits;
  CHECK(forward == shuffled);

  req.representation = Representation::BlockLowRank;
  req.method = Method::Integer;
  req.config.alpha = 2.0;
  req.clusters = 3;
  req.lowrank = 16;
  req.variables = {a, b, c};
  const double blr_forward = mutual_information(req).bits;
  req.variables = {b, c, a};
  const double blr_shuffled = mutual_information(req).bits;
  CHECK(blr_forward == blr_shuffled);
}

TEST_CASE("two-variable total correlation is mutual information") {
  const Variable x = make_variable(testutil::random_samples(64, 2, 31).x);
  const Variable y = make_variable(testutil::random_samples(64, 3, 32).x);

  for (double alpha : {0.5, 2.0}) {
    MeasureRequest tc_req = exact_request(alpha);
    tc_req.variables = {x, y};
    MeasureRequest mi_req = exact_request(alpha);
    mi_req.variables = {x};
    mi_req.target = y;
    CHECK(total_correlation(tc_req).bits ==
          doctest::Approx(mutual_information(mi_req).bits).epsilon(1e-12));
  }
}

TEST_CASE("independent variables carry little total correlation, and the estimate sees it") {
  const Variable x = make_variable(testutil::random_samples(128, 1, 41).x);
  const Variable y = make_variable(testutil::random_samples(128, 1, 42).x);

  MeasureRequest req = exact_request(2.0);
  req.variables = {x, y};
  const double exact = total_correlation(req).bits;
  CHECK(exact >= 0.0);
  CHECK(exact < 0.1);

  // the three-term difference inherits noise from each trace estimate, so
  // resolving a near-zero value takes a large sketch budget
  req.method = Method::Integer;
  req.config.sketches = 40000;
  std::vector<double> errs;
  for (int seed = 0; seed < 10; ++seed) {
    req.config.seed = static_cast<std::uint64_t>(seed);
    errs.push_back(std::abs(total_correlation(req).bits - exact));
  }
  CHECK(testutil::mean(errs) <= 2e-2);
}

TEST_CASE("duplicated variables reduce to a hand-composed entropy difference") {
  const Variable x = make_variable(testutil::random_samples(48, 2, 51).x);
  MeasureRequest req = exact_request(2.0);
  req.variables = {x, x};
  const EntropyEstimate est = total_correlation(req);

  const GramMatrix g = build_gram(x.samples, x.kernel);
  const GramMatrix joint = hadamard_joint({&g, &g});
  const double expected = 2.0 * exact_entropy(g, 2.0) - exact_entropy(joint, 2.0);
  CHECK(est.bits == doctest::Approx(expected).epsilon(1e-12));

  REQUIRE(est.terms.size() == 3);
  CHECK(est.terms[0].label == "variable_0");
  CHECK(est.terms[1].label == "variable_1");
  CHECK(est.terms[2].label == "joint");
  CHECK(est.bits == est.terms[0].bits + est.terms[1].bits - est.terms[2].bits);
}

TEST_CASE("mutual information metadata recomposes to the estimate") {
  MeasureRequest req;
  req.method = Method::Chebyshev;
  req.config.alpha = 2.5;
  req.config.degree = 15;
  req.config.sketches = 40;
  req.config.seed = 3;
  req.variables = {make_variable(testutil::random_samples(64, 2, 61).x)};
  req.target = make_variable(testutil::random_samples(64, 2, 62).x);
  const EntropyEstimate est = mutual_information(req);
  REQUIRE(est.terms.size() == 3);
  CHECK(est.bits == est.terms[0].bits + est.terms[1].bits - est.terms[2].bits);
  CHECK(est.method == "chebyshev");
  CHECK(est.sketches == 40);
}

TEST_CASE("a feature that copies the label is selected first") {
  const SampleSet features = testutil::random_samples(200, 10, 83);
  SampleSet labels;
  labels.x = features.x.col(7);

  MeasureRequest tmpl = exact_request(2.0);
  tmpl.variables = {make_variable(features.x)};
  tmpl.target = make_variable(labels.x);

  // brute-force confirmation that the copied feature maximizes single-feature
  // MI under the exact backend
  Index best = -1;
  double best_mi = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < 10; ++i) {
    MeasureRequest req = exact_request(2.0);
    req.variables = {make_variable(features.x.col(i))};
    req.target = make_variable(labels.x);
    const double mi = mutual_information(req).bits;
    if (mi > best_mi) {
      best_mi = mi;
      best = i;
    }
  }
  REQUIRE(best == 7);

  const std::vector<Index> picked = greedy_feature_selection(features, labels, 1, tmpl);
  REQUIRE(picked.size() == 1);
  CHECK(picked[0] == 7);

  const std::vector<Index> all = greedy_feature_selection(features, labels, 10, tmpl);
  CHECK(all[0] == 7);
  std::vector<Index> sorted = all;
  std::sort(sorted.begin(), sorted.end());
  std::vector<Index> iota(10);
  std::iota(iota.begin(), iota.end(), Index{0});
  CHECK(sorted == iota);
}

TEST_CASE("sketched selection reproduces the exact first pick on nearly every seed") {
  const SampleSet features = testutil::random_samples(200, 10, 83);
  SampleSet labels;
  labels.x = features.x.col(7);

  MeasureRequest tmpl;
  tmpl.method = Method::Chebyshev;
  tmpl.config.alpha = 1.5;
  tmpl.config.degree = 20;
  tmpl.config.sketches = 50;
  tmpl.variables = {make_variable(features.x)};
  tmpl.target = make_variable(labels.x);

  int hits = 0;
  for (int seed = 0; seed < 100; ++seed) {
    tmpl.config.seed = static_cast<std::uint64_t>(seed);
    if (greedy_feature_selection(features, labels, 1, tmpl)[0] == 7) ++hits;
  }
  CHECK(hits >= 95);
}

TEST_CASE("pairwise mutual information is symmetric under the exact backend") {
  const Variable x = make_variable(testutil::random_samples(64, 2, 71).x);
  const Variable y = make_variable(testutil::random_samples(64, 3, 72).x);
  for (double alpha : {0.5, 2.0}) {
    MeasureRequest xy = exact_request(alpha);
    xy.variables = {x};
    xy.target = y;
    MeasureRequest yx = exact_request(alpha);
    yx.variables = {y};
    yx.target = x;
    CHECK(mutual_information(xy).bits ==
          doctest::Approx(mutual_information(yx).bits).epsilon(1e-12));
  }
}

TEST_CASE("exact mutual information never dips below zero") {
  for (int instance = 0; instance < 10; ++instance) {
    const Index dx = 1 + instance % 3;
    const Index dy = 1 + (instance + 1) % 3;
    const Variable x =
        make_variable(testutil::random_samples(64, dx, 200 + static_cast<std::uint64_t>(instance)).x);
    const Variable y =
        make_variable(testutil::random_samples(64, dy, 300 + static_cast<std::uint64_t>(instance)).x);
    for (double alpha : {0.5, 2.0}) {
      MeasureRequest req = exact_request(alpha);
      req.variables = {x};
      req.target = y;
      CHECK(mutual_information(req).bits >= -1e-10);
    }
  }
}

TEST_CASE("selection order is stable under feature column permutation") {
  const SampleSet features = testutil::random_samples(150, 8, 93);
  SampleSet labels;
  labels.x = features.x.col(2) + 0.3 * features.x.col(5);

  MeasureRequest tmpl = exact_request(2.0);
  tmpl.variables = {make_variable(features.x)};
  tmpl.target = make_variable(labels.x);
  const std::vector<Index> original = greedy_feature_selection(features, labels, 3, tmpl);

  const std::vector<Index> perm{5, 2, 7, 0, 4, 6, 1, 3};
  SampleSet shuffled;
  shuffled.x.resize(150, 8);
  for (Index j = 0; j < 8; ++j) shuffled.x.col(j) = features.x.col(perm[static_cast<std::size_t>(j)]);
  const std::vector<Index> remapped = greedy_feature_selection(shuffled, labels, 3, tmpl);

  REQUIRE(remapped.size() == original.size());
  for (std::size_t k = 0; k < original.size(); ++k) {
    CHECK(perm[static_cast<std::size_t>(remapped[k])] == original[k]);
  }
}

TEST_CASE("block low-rank joints tag the method and reject unsupported combinations") {
  const Variable x = make_variable(testutil::random_samples(64, 2, 101).x);
  const Variable y = make_variable(testutil::random_samples(64, 2, 102).x);

  MeasureRequest req;
  req.method = Method::Integer;
  req.representation = Representation::BlockLowRank;
  req.config.alpha = 2.0;
  req.config.sketches = 50;
  req.clusters = 2;
  req.lowrank = 8;
  req.variables = {x, y};
  CHECK(entropy(req).method == "integer+blr");

  req.method = Method::Exact;
  CHECK_THROWS_AS(entropy(req), std::invalid_argument);

  req.method = Method::Integer;
  Variable poly = x;
  poly.kernel = testutil::polynomial_spec();
  req.variables = {poly, y};
  CHECK_THROWS_AS(entropy(req), std::invalid_argument);
}

TEST_CASE("request validation") {
  const Variable x = make_variable(testutil::random_samples(32, 2, 111).x);
  const Variable y_short = make_variable(testutil::random_samples(16, 2, 112).x);

  MeasureRequest no_target = exact_request(2.0);
  no_target.variables = {x};
  CHECK_THROWS_AS(mutual_information(no_target), std::invalid_argument);

  MeasureRequest one_var = exact_request(2.0);
  one_var.variables = {x};
  CHECK_THROWS_AS(total_correlation(one_var), std::invalid_argument);

  MeasureRequest mismatched = exact_request(2.0);
  mismatched.variables = {x, y_short};
  CHECK_THROWS_AS(total_correlation(mismatched), std::invalid_argument);

  MeasureRequest empty = exact_request(2.0);
  CHECK_THROWS_AS(entropy(empty), std::invalid_argument);
}
