#include "rentropy/exact_oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "rentropy/kernel_gram.hpp"

namespace rentropy {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
  if (std::abs(alpha - 1.0) < kAlphaOneGuard)
    throw std::invalid_argument("alpha too close to 1");
}

}  // namespace

Spectrum eigen_spectrum(const GramMatrix& gram) {
  if (gram.n() == 0) throw std::invalid_argument("empty Gram matrix");
  if (!gram.g.allFinite()) throw std::invalid_argument("Gram matrix has non-finite entries");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram.g, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("symmetric eigensolver failed");

  Spectrum out;
  out.lambda = solver.eigenvalues().reverse();
  for (Index i = 0; i < out.lambda.size(); ++i) {
    if (out.lambda[i] < kPsdTol)
      throw NotPsdError("eigenvalue " + std::to_string(out.lambda[i]) +
                        " below the PSD tolerance; matrix is not a valid Gram");
    if (out.lambda[i] < 0.0) out.lambda[i] = 0.0;
  }
  return out;
}

double spectrum_trace_power(const Spectrum& spec, double p) {
  double acc = 0.0;
  for (Index i = 0; i < spec.n(); ++i) {
    const double lam = spec.lambda[i];
    acc += lam > 0.0 ? std::pow(lam, p) : 0.0;
  }
  return acc;
}

double exact_entropy(const Spectrum& spec, double alpha) {
  check_alpha(alpha);
  const double trace_pow = spectrum_trace_power(spec, alpha);
  if (!(trace_pow > 0.0)) throw NumericError("tr(G^alpha) is not positive");
  double bits = std::log2(trace_pow) / (1.0 - alpha);

  // The exact value lies in [0, log2 n]; shave round-off excursions only.
  const double top = std::log2(static_cast<double>(spec.n()));
  if (bits < 0.0 && bits > -1e-9) bits = 0.0;
  if (bits > top && bits < top + 1e-9) bits = top;
  return bits;
}

double exact_entropy(const GramMatrix& gram, double alpha) {
  return exact_entropy(eigen_spectrum(gram), alpha);
}

double exact_mutual_information(const std::vector<const GramMatrix*>& xs, const GramMatrix& y,
                                double alpha) {
  if (xs.empty()) throw std::invalid_argument("mutual information needs at least one variable");
  check_alpha(alpha);

  const GramMatrix* x_joint_ptr = xs.front();
  GramMatrix x_joint;
  if (xs.size() > 1) {
    x_joint = hadamard_joint(xs);
    x_joint_ptr = &x_joint;
  }
  std::vector<const GramMatrix*> all(xs);
  all.push_back(&y);
  const GramMatrix full = hadamard_joint(all);

  return exact_entropy(*x_joint_ptr, alpha) + exact_entropy(y, alpha) - exact_entropy(full, alpha);
}

double exact_total_correlation(const std::vector<const GramMatrix*>& vars, double alpha) {
  if (vars.size() < 2) throw std::invalid_argument("total correlation needs at least two variables");
  check_alpha(alpha);

  double acc = 0.0;
  for (const GramMatrix* g : vars) acc += exact_entropy(*g, alpha);
  return acc - exact_entropy(hadamard_joint(vars), alpha);
}

}  // namespace rentropy
