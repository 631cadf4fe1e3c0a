#include "rentropy/kernel_gram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rentropy/kernels.hpp"

namespace rentropy {

void validate_kernel(const KernelSpec& spec) {
  if (spec.family == KernelFamily::Gaussian) {
    if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma))
      throw std::invalid_argument("gaussian kernel needs sigma > 0");
  } else {
    if (spec.degree < 1) throw std::invalid_argument("polynomial kernel needs degree >= 1");
    if (!(spec.shift >= 0.0) || !std::isfinite(spec.shift))
      throw std::invalid_argument("polynomial kernel needs shift >= 0");
  }
}

void validate_samples(const SampleSet& data) {
  if (data.n() < 2 || data.d() == 0)
    throw std::invalid_argument("sample set needs at least 2 samples and 1 feature");
  if (!data.x.allFinite()) throw std::invalid_argument("sample set has non-finite entries");
}

GramMatrix build_gram(const SampleSet& data, const KernelSpec& spec) {
  validate_samples(data);
  validate_kernel(spec);
  const Index n = data.n();
  const Index d = data.d();

  Vec diag_k(n);
  if (spec.family == KernelFamily::Gaussian) {
    diag_k.setOnes();
  } else {
    for (Index i = 0; i < n; ++i) {
      const double* xi = data.x.data() + i * d;
      diag_k[i] = kernel_value(spec, xi, xi, d);
      if (!(diag_k[i] > 0.0))
        throw std::invalid_argument("polynomial kernel has non-positive k(x,x); normalization undefined");
    }
  }

  GramMatrix gram;
  kernels::omp::gram_fill(data, spec, diag_k, gram.g);
  return gram;
}

GramMatrix hadamard_joint(const std::vector<const GramMatrix*>& grams) {
  if (grams.size() < 2) throw std::invalid_argument("joint needs at least two Gram matrices");
  const Index n = grams.front()->n();
  for (const GramMatrix* g : grams) {
    if (g == nullptr) throw std::invalid_argument("null Gram matrix");
    if (g->n() != n) throw std::invalid_argument("joint Gram matrices must share n");
  }

  // Entrywise products are reassociated into a content-canonical factor order
  // so the result does not depend on the argument order, bit for bit.
  std::vector<const GramMatrix*> order(grams);
  std::sort(order.begin(), order.end(), [n](const GramMatrix* a, const GramMatrix* b) {
    return std::lexicographical_compare(a->g.data(), a->g.data() + n * n, b->g.data(),
                                        b->g.data() + n * n);
  });

  GramMatrix joint;
  joint.g = order.front()->g;
  for (std::size_t t = 1; t < order.size(); ++t) joint.g.array() *= order[t]->g.array();

  double trace = 0.0;
  for (Index i = 0; i < n; ++i) trace += joint.g(i, i);
  if (!(trace > 0.0)) throw NumericError("joint Gram trace is not positive");
  joint.g.array() /= trace;
  // The exact product diagonal is n^-L and the trace n^(1-L); rewriting the
  // diagonal as 1/n removes the division round-off there.
  const double inv_n = 1.0 / static_cast<double>(n);
  for (Index i = 0; i < n; ++i) joint.g(i, i) = inv_n;
  return joint;
}

}  // namespace rentropy
