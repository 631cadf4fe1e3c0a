#include "rentropy/sketch.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "rentropy/rng.hpp"

namespace rentropy {

void SpectralOperator::apply_block(const ColMat& x, ColMat& y) const {
  y.resize(x.rows(), x.cols());
  Vec in(x.rows()), out(x.rows());
  for (Index c = 0; c < x.cols(); ++c) {
    in = x.col(c);
    apply(in, out);
    y.col(c) = out;
  }
}

SketchBatch sample_sketch(Index n, int s, Probe distribution, std::uint64_t seed) {
  if (n < 1 || s < 1) throw std::invalid_argument("sketch batch needs n >= 1 and s >= 1");
  SketchBatch batch;
  batch.vectors.resize(n, s);
  batch.distribution = distribution;
  batch.seed = seed;
  for (int c = 0; c < s; ++c) {
    auto rng = stream_rng(seed, kStreamSketch + static_cast<std::uint64_t>(c));
    double* col = batch.vectors.data() + static_cast<Index>(c) * n;
    if (distribution == Probe::Gaussian) {
      std::normal_distribution<double> normal(0.0, 1.0);
      for (Index i = 0; i < n; ++i) col[i] = normal(rng);
    } else {
      for (Index i = 0; i < n; ++i) col[i] = (rng() >> 63) ? 1.0 : -1.0;
    }
  }
  return batch;
}

std::vector<double> quadratic_forms(const SpectralOperator& op, int power,
                                    const SketchBatch& batch) {
  if (power < 1) throw std::invalid_argument("power must be >= 1");
  if (batch.n() != op.order()) throw std::invalid_argument("batch rows must match operator order");

  ColMat w = batch.vectors;
  ColMat next;
  for (int t = 0; t < power; ++t) {
    op.apply_block(w, next);
    w.swap(next);
  }
  std::vector<double> forms(static_cast<std::size_t>(batch.s()));
  for (Index c = 0; c < batch.vectors.cols(); ++c) {
    const double f = batch.vectors.col(c).dot(w.col(c));
    if (!std::isfinite(f)) throw NumericError("non-finite quadratic form in trace sketch");
    forms[static_cast<std::size_t>(c)] = f;
  }
  return forms;
}

double hutchinson_trace(const SpectralOperator& op, int power, const SketchBatch& batch) {
  const std::vector<double> forms = quadratic_forms(op, power, batch);
  double acc = 0.0;
  for (double f : forms) acc += f;  // fixed column order
  return acc / static_cast<double>(forms.size());
}

int hutchinson_sketch_count(double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  return static_cast<int>(std::ceil(8.0 * std::log(2.0 / delta) / (epsilon * epsilon)));
}

PowerResult power_iteration(const SpectralOperator& op, int max_iters, double tol,
                            std::uint64_t seed) {
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  const Index n = op.order();

  Vec v(n), w(n);
  for (int attempt = 0; attempt <= 3; ++attempt) {
    auto rng = stream_rng(seed, kStreamPower + static_cast<std::uint64_t>(attempt));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Index i = 0; i < n; ++i) v[i] = normal(rng);
    const double norm = v.norm();
    if (!(norm > 0.0)) continue;
    v /= norm;

    PowerResult result;
    double prev = 0.0;
    bool collapsed = false;
    for (int it = 1; it <= max_iters; ++it) {
      op.apply(v, w);
      const double rayleigh = v.dot(w);
      result.iters = it;
      result.lambda = rayleigh;
      // Exact eigenvector: the Rayleigh quotient is already exact.
      if ((w - rayleigh * v).norm() <= 1e-14 * std::max(std::abs(rayleigh), 1e-300) *
                                          std::sqrt(static_cast<double>(n))) {
        result.converged = true;
        break;
      }
      const double wnorm = w.norm();
      if (!(wnorm > 1e-300)) {
        collapsed = true;
        break;
      }
      v = w / wnorm;
      if (it > 1 && std::abs(rayleigh - prev) < tol) {
        result.converged = true;
        break;
      }
      prev = rayleigh;
    }
    if (!collapsed) {
      result.lambda *= 1.0 + 1e-6;
      return result;
    }
  }
  throw NumericError("power iteration start vector collapsed repeatedly");
}

EntropyEstimate integer_entropy(const SpectralOperator& op, const EstimatorConfig& config) {
  config.validate();
  const double rounded = std::round(config.alpha);
  if (std::abs(config.alpha - rounded) > 1e-9 || rounded < 2.0)
    throw std::invalid_argument("integer estimator needs integer alpha >= 2");
  const int power = static_cast<int>(rounded);

  const auto t0 = std::chrono::steady_clock::now();
  const SketchBatch batch = sample_sketch(op.order(), config.sketches, Probe::Gaussian, config.seed);
  const double mean = hutchinson_trace(op, power, batch);
  if (!(mean > 0.0))
    throw CollapsedEstimateError("estimate collapsed: mean sketched trace is not positive");

  EntropyEstimate est;
  est.bits = std::log2(mean) / (1.0 - config.alpha);
  est.method = "integer";
  est.alpha = config.alpha;
  est.sketches = config.sketches;
  est.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return est;
}

}  // namespace rentropy
