#include "rentropy/kernels.hpp"

#include <cmath>

namespace rentropy {

double kernel_value(const KernelSpec& spec, const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("kernel arguments differ in dimension");
  if (!x.allFinite() || !y.allFinite())
    throw std::invalid_argument("kernel arguments must be finite");
  return kernel_value(spec, x.data(), y.data(), x.size());
}

double kernel_value(const KernelSpec& spec, const double* x, const double* y, Index d) {
  if (spec.family == KernelFamily::Gaussian) {
    double sq = 0.0;
    for (Index t = 0; t < d; ++t) {
      const double diff = x[t] - y[t];
      sq += diff * diff;
    }
    return std::exp(-sq / (2.0 * spec.sigma * spec.sigma));
  }
  double dot = 0.0;
  for (Index t = 0; t < d; ++t) dot += x[t] * y[t];
  return std::pow(dot + spec.shift, spec.degree);
}

namespace kernels {

namespace serial {

void matvec(const RowMat& g, const double* x, double* y) {
  const Index n = g.rows();
  for (Index i = 0; i < n; ++i) {
    const double* gi = g.data() + i * n;
    double acc = 0.0;
    for (Index j = 0; j < n; ++j) acc += gi[j] * x[j];
    y[i] = acc;
  }
}

void apply_block(const RowMat& g, const ColMat& x, ColMat& y) {
  const Index n = g.rows();
  const Index s = x.cols();
  y.resize(n, s);
  for (Index c = 0; c < s; ++c) {
    const double* xc = x.data() + c * n;
    double* yc = y.data() + c * n;
    for (Index i = 0; i < n; ++i) {
      const double* gi = g.data() + i * n;
      double acc = 0.0;
      for (Index j = 0; j < n; ++j) acc += gi[j] * xc[j];
      yc[i] = acc;
    }
  }
}

void gram_fill(const SampleSet& data, const KernelSpec& spec, const Vec& diag_k, RowMat& out) {
  const Index n = data.n();
  const Index d = data.d();
  out.resize(n, n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (Index i = 0; i < n; ++i) {
    out(i, i) = inv_n;
    const double* xi = data.x.data() + i * d;
    for (Index j = i + 1; j < n; ++j) {
      const double k = kernel_value(spec, xi, data.x.data() + j * d, d);
      const double v = gram_entry(k, n, diag_k[i], diag_k[j]);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
}

}  // namespace serial

namespace omp {

void matvec(const RowMat& g, const double* x, double* y) {
  const Index n = g.rows();
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    const double* gi = g.data() + i * n;
    double acc = 0.0;
    for (Index j = 0; j < n; ++j) acc += gi[j] * x[j];
    y[i] = acc;
  }
}

void apply_block(const RowMat& g, const ColMat& x, ColMat& y) {
  const Index n = g.rows();
  const Index s = x.cols();
  y.resize(n, s);
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < s; ++c) {
    const double* xc = x.data() + c * n;
    double* yc = y.data() + c * n;
    for (Index i = 0; i < n; ++i) {
      const double* gi = g.data() + i * n;
      double acc = 0.0;
      for (Index j = 0; j < n; ++j) acc += gi[j] * xc[j];
      yc[i] = acc;
    }
  }
}

void gram_fill(const SampleSet& data, const KernelSpec& spec, const Vec& diag_k, RowMat& out) {
  const Index n = data.n();
  const Index d = data.d();
  out.resize(n, n);
  const double inv_n = 1.0 / static_cast<double>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (Index i = 0; i < n; ++i) {
    out(i, i) = inv_n;
    const double* xi = data.x.data() + i * d;
    for (Index j = i + 1; j < n; ++j) {
      const double k = kernel_value(spec, xi, data.x.data() + j * d, d);
      const double v = gram_entry(k, n, diag_k[i], diag_k[j]);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
}

}  // namespace omp

void matvec(const RowMat& g, const Vec& x, Vec& y) {
  y.resize(g.rows());
  omp::matvec(g, x.data(), y.data());
}

void apply_block(const RowMat& g, const ColMat& x, ColMat& y) {
  y.resize(g.rows(), x.cols());
  y.noalias() = g * x;
}

}  // namespace kernels
}  // namespace rentropy
