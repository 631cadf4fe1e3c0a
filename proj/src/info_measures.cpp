#include "rentropy/info_measures.hpp"

#include <algorithm>
#include <chrono>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "rentropy/block_lowrank.hpp"
#include "rentropy/exact_oracle.hpp"
#include "rentropy/kernel_gram.hpp"
#include "rentropy/lanczos.hpp"
#include "rentropy/operators.hpp"
#include "rentropy/poly_approx.hpp"
#include "rentropy/sketch.hpp"

namespace rentropy {

const char* method_name(Method m) {
  switch (m) {
    case Method::Exact: return "exact";
    case Method::Integer: return "integer";
    case Method::Taylor: return "taylor";
    case Method::Chebyshev: return "chebyshev";
    case Method::Lanczos: return "lanczos";
  }
  return "unknown";
}

EntropyEstimate operator_entropy(const SpectralOperator& op, Method method,
                                 const EstimatorConfig& config) {
  switch (method) {
    case Method::Integer: return integer_entropy(op, config);
    case Method::Taylor: return taylor_entropy(op, config);
    case Method::Chebyshev: return chebyshev_entropy(op, config);
    case Method::Lanczos: return lanczos_entropy(op, config);
    case Method::Exact: break;
  }
  throw std::invalid_argument("exact backend is not an operator estimator");
}

namespace {

Index common_sample_count(const std::vector<const Variable*>& vars) {
  if (vars.empty()) throw std::invalid_argument("need at least one variable");
  const Index n = vars.front()->samples.n();
  for (const Variable* v : vars) {
    if (v->samples.n() != n) throw std::invalid_argument("variables disagree on sample count");
  }
  return n;
}

// Joint entropy of a variable subset. The subset is canonicalized by content
// before combination, so any ordering of the same variables produces
// bit-identical results.
EntropyEstimate joint_entropy(std::vector<const Variable*> vars, const MeasureRequest& req) {
  const Index n = common_sample_count(vars);

  if (req.representation == Representation::Dense) {
    std::vector<GramMatrix> grams(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) {
      grams[i] = build_gram(vars[i]->samples, vars[i]->kernel);
    }
    GramMatrix joint;
    if (grams.size() == 1) {
      joint = std::move(grams.front());
    } else {
      std::vector<const GramMatrix*> ptrs;
      ptrs.reserve(grams.size());
      for (const GramMatrix& g : grams) ptrs.push_back(&g);
      joint = hadamard_joint(ptrs);
    }
    if (req.method == Method::Exact) {
      const auto t0 = std::chrono::steady_clock::now();
      EntropyEstimate est;
      est.bits = exact_entropy(joint, req.config.alpha);
      est.method = "exact";
      est.alpha = req.config.alpha;
      est.elapsed_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return est;
    }
    DenseOperator op(joint);
    return operator_entropy(op, req.method, req.config);
  }

  if (req.method == Method::Exact) {
    throw std::invalid_argument("exact backend requires the dense representation");
  }
  for (const Variable* v : vars) {
    if (!v->kernel.shift_invariant()) {
      throw std::invalid_argument("block low-rank joints require shift-invariant kernels");
    }
  }
  // The Hadamard product of gaussian Grams is the gaussian Gram of the
  // sigma-scaled concatenated features, which keeps the joint shift-invariant
  // and approximable. Factors are ordered by content for permutation
  // invariance.
  std::vector<RowMat> scaled(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    scaled[i] = vars[i]->samples.x / vars[i]->kernel.sigma;
  }
  std::vector<const RowMat*> order;
  order.reserve(scaled.size());
  for (const RowMat& m : scaled) order.push_back(&m);
  std::stable_sort(order.begin(), order.end(), [](const RowMat* a, const RowMat* b) {
    if (a->size() != b->size()) return a->size() < b->size();
    return std::lexicographical_compare(a->data(), a->data() + a->size(), b->data(),
                                        b->data() + b->size());
  });
  Index total_d = 0;
  for (const RowMat* m : order) total_d += m->cols();
  SampleSet concat;
  concat.x.resize(n, total_d);
  Index at = 0;
  for (const RowMat* m : order) {
    concat.x.middleCols(at, m->cols()) = *m;
    at += m->cols();
  }
  KernelSpec unit;
  unit.family = KernelFamily::Gaussian;
  unit.sigma = 1.0;
  const int c = req.clusters > 0 ? req.clusters : default_cluster_count(n);
  const int k = req.lowrank > 0 ? req.lowrank : default_rank(n);
  const BlockLowRank blr = build_block_lowrank(concat, unit, c, k, req.config.seed);
  EntropyEstimate est = operator_entropy(blr, req.method, req.config);
  est.method += "+blr";
  return est;
}

std::vector<const Variable*> pointers(const std::vector<Variable>& vars) {
  std::vector<const Variable*> p;
  p.reserve(vars.size());
  for (const Variable& v : vars) p.push_back(&v);
  return p;
}

}  // namespace

EntropyEstimate entropy(const MeasureRequest& req) {
  return joint_entropy(pointers(req.variables), req);
}

EntropyEstimate mutual_information(const MeasureRequest& req) {
  if (req.variables.empty()) throw std::invalid_argument("mutual information needs a variable");
  if (!req.target) throw std::invalid_argument("mutual information needs a target");

  std::vector<const Variable*> vars = pointers(req.variables);
  std::vector<const Variable*> all = vars;
  all.push_back(&*req.target);

  const EntropyEstimate s_vars = joint_entropy(vars, req);
  const EntropyEstimate s_target = joint_entropy({&*req.target}, req);
  const EntropyEstimate s_all = joint_entropy(all, req);

  EntropyEstimate est;
  est.bits = s_vars.bits + s_target.bits - s_all.bits;
  est.method = s_all.method;
  est.alpha = req.config.alpha;
  est.sketches = s_all.sketches;
  est.degree = s_all.degree;
  est.elapsed_s = s_vars.elapsed_s + s_target.elapsed_s + s_all.elapsed_s;
  est.terms = {{"variables", s_vars.bits}, {"target", s_target.bits}, {"joint", s_all.bits}};
  return est;
}

EntropyEstimate total_correlation(const MeasureRequest& req) {
  if (req.variables.size() < 2) throw std::invalid_argument("total correlation needs two variables");

  EntropyEstimate est;
  est.alpha = req.config.alpha;
  double marginal_sum = 0.0;
  for (std::size_t i = 0; i < req.variables.size(); ++i) {
    const EntropyEstimate s = joint_entropy({&req.variables[i]}, req);
    marginal_sum += s.bits;
    est.elapsed_s += s.elapsed_s;
    est.terms.push_back({"variable_" + std::to_string(i), s.bits});
  }
  const EntropyEstimate s_all = joint_entropy(pointers(req.variables), req);
  est.bits = marginal_sum - s_all.bits;
  est.method = s_all.method;
  est.sketches = s_all.sketches;
  est.degree = s_all.degree;
  est.elapsed_s += s_all.elapsed_s;
  est.terms.push_back({"joint", s_all.bits});
  return est;
}

std::vector<Index> greedy_feature_selection(const SampleSet& features, const SampleSet& labels,
                                            int count, const MeasureRequest& tmpl) {
  validate_samples(features);
  validate_samples(labels);
  if (features.n() != labels.n()) throw std::invalid_argument("feature/label sample counts differ");
  const Index f = features.d();
  if (count < 1 || count > f) throw std::invalid_argument("count must be in [1, feature count]");
  if (tmpl.variables.empty()) {
    throw std::invalid_argument("selection template needs a variable carrying the feature kernel");
  }
  const KernelSpec feature_kernel = tmpl.variables.front().kernel;
  const KernelSpec label_kernel = tmpl.target ? tmpl.target->kernel : feature_kernel;

  auto column_variable = [&](Index i) {
    Variable v;
    v.samples.x = features.x.col(i);
    v.kernel = feature_kernel;
    return v;
  };

  MeasureRequest req;
  req.method = tmpl.method;
  req.representation = tmpl.representation;
  req.config = tmpl.config;
  req.clusters = tmpl.clusters;
  req.lowrank = tmpl.lowrank;
  req.target = Variable{labels, label_kernel};

  std::vector<Index> selected;
  std::vector<char> used(static_cast<std::size_t>(f), 0);
  for (int step = 0; step < count; ++step) {
    Index best = -1;
    double best_score = 0.0;
    for (Index i = 0; i < f; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      req.variables.clear();
      for (Index j : selected) req.variables.push_back(column_variable(j));
      req.variables.push_back(column_variable(i));
      const double score = mutual_information(req).bits;
      if (best < 0 || score > best_score) {
        best = i;
        best_score = score;
      }
    }
    used[static_cast<std::size_t>(best)] = 1;
    selected.push_back(best);
  }
  return selected;
}

}  // namespace rentropy
