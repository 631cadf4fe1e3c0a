#include "rentropy/lanczos.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rentropy {

namespace {

constexpr double kBreakdownTol = 1e-12;

// Matrix powers T^alpha and the quadratic forms are fine at alpha = 1; the
// Renyi alpha != 1 restriction applies only when dividing by 1 - alpha, which
// config.validate() covers at the estimator level.
void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be positive and finite");
  }
}

}  // namespace

LanczosFactorization lanczos_factorize(const SpectralOperator& op, const Vec& g, int m) {
  const Index n = op.order();
  if (g.size() != n) throw std::invalid_argument("probe length does not match operator order");
  if (m < 1 || m > n) throw std::invalid_argument("lanczos step count must be in [1, n]");
  const double gnorm = g.norm();
  if (!(gnorm > 0.0)) throw std::invalid_argument("probe vector must be nonzero");

  ColMat q(n, m);
  Vec gamma(m), beta(m > 1 ? m - 1 : 0);
  q.col(0) = g / gnorm;

  Vec w(n);
  bool breakdown = false;
  int k = m;
  for (int j = 0; j < m; ++j) {
    op.apply(q.col(j), w);
    if (j > 0) w -= beta(j - 1) * q.col(j - 1);
    gamma(j) = w.dot(q.col(j));
    w -= gamma(j) * q.col(j);
    // full reorthogonalization, two MGS sweeps over the basis built so far
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) {
        w -= w.dot(q.col(i)) * q.col(i);
      }
    }
    if (j + 1 == m) break;
    const double b = w.norm();
    if (b < kBreakdownTol) {
      breakdown = true;
      k = j + 1;
      break;
    }
    beta(j) = b;
    q.col(j + 1) = w / b;
  }

  LanczosFactorization fac;
  fac.diag = gamma.head(k);
  fac.offdiag = k > 1 ? Vec(beta.head(k - 1)) : Vec(0);
  fac.basis = q.leftCols(k);
  fac.breakdown = breakdown;
  return fac;
}

Vec tridiag_alpha_first_column(const Vec& diag, const Vec& offdiag, double alpha) {
  const Index k = diag.size();
  if (k < 1) throw std::invalid_argument("empty tridiagonal");
  if (offdiag.size() != k - 1) throw std::invalid_argument("offdiagonal length must be k-1");
  check_alpha(alpha);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, offdiag, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw NumericError("tridiagonal eigensolve failed");

  const Vec& lam = es.eigenvalues();
  const ColMat& v = es.eigenvectors();
  Vec p = Vec::Zero(k);
  for (Index i = 0; i < k; ++i) {
    double ritz = lam(i);
    if (ritz < 0.0) {
      if (ritz < kPsdTol) {
        throw NotPsdError("Ritz value " + std::to_string(ritz) +
                          " below the PSD tolerance; operator is not PSD");
      }
      ritz = 0.0;
    }
    p += std::pow(ritz, alpha) * v(0, i) * v.col(i);
  }
  return p;
}

int lanczos_steps(double eps, double alpha, double kappa) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
  if (!(kappa > 1.0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must exceed 1");
  const double raw = 0.25 * std::sqrt(kappa) * std::log(std::pow(kappa, alpha + 0.5) / eps);
  if (!(raw < 2e9)) throw std::invalid_argument("step count overflows practical range");
  const int m = static_cast<int>(std::ceil(raw));
  return m < 1 ? 1 : m;
}

int quadrature_sketch_count(double epsilon, double delta) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0,1)");
  if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  const double raw = 24.0 * std::log(2.0 / delta) / (epsilon * epsilon);
  if (!(raw < 2e9)) throw std::invalid_argument("sketch count overflows practical range");
  return static_cast<int>(std::ceil(raw));
}

std::vector<double> lanczos_quadrature_terms(const SpectralOperator& op, double alpha, int m,
                                             const SketchBatch& batch) {
  const Index n = op.order();
  const Index s = batch.s();
  if (batch.n() != n) throw std::invalid_argument("sketch length does not match operator order");
  if (m < 1 || m > n) throw std::invalid_argument("lanczos step count must be in [1, n]");
  check_alpha(alpha);

  // All columns advance through the same step index in lockstep so the
  // operator applications batch into one gemm per step; the columns stay
  // mathematically independent (a finished column is zeroed and its
  // recurrence coefficients frozen).
  std::vector<ColMat> q(static_cast<std::size_t>(m));
  for (auto& b : q) b = ColMat::Zero(n, s);
  ColMat gam = ColMat::Zero(m, s);
  ColMat bet = m > 1 ? ColMat::Zero(m - 1, s) : ColMat::Zero(0, s);
  std::vector<int> steps(static_cast<std::size_t>(s), m);
  std::vector<char> active(static_cast<std::size_t>(s), 1);

  for (Index c = 0; c < s; ++c) {
    const double norm = batch.vectors.col(c).norm();
    if (!(norm > 0.0)) throw NumericError("zero probe column in sketch batch");
    q[0].col(c) = batch.vectors.col(c) / norm;
  }

  ColMat z(n, s);
  for (int j = 0; j < m; ++j) {
    op.apply_block(q[static_cast<std::size_t>(j)], z);
    if (j > 0) {
      z.noalias() -= q[static_cast<std::size_t>(j - 1)] * bet.row(j - 1).asDiagonal();
    }
    const Eigen::RowVectorXd g_row =
        (q[static_cast<std::size_t>(j)].array() * z.array()).colwise().sum().matrix();
    z.noalias() -= q[static_cast<std::size_t>(j)] * g_row.asDiagonal();
    for (Index c = 0; c < s; ++c) {
      if (active[static_cast<std::size_t>(c)]) gam(j, c) = g_row(c);
    }
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) {
        const Eigen::RowVectorXd h =
            (q[static_cast<std::size_t>(i)].array() * z.array()).colwise().sum().matrix();
        z.noalias() -= q[static_cast<std::size_t>(i)] * h.asDiagonal();
      }
    }
    if (j + 1 == m) break;
    for (Index c = 0; c < s; ++c) {
      if (!active[static_cast<std::size_t>(c)]) continue;
      const double b = z.col(c).norm();
      if (b < kBreakdownTol) {
        active[static_cast<std::size_t>(c)] = 0;
        steps[static_cast<std::size_t>(c)] = j + 1;
      } else {
        bet(j, c) = b;
        q[static_cast<std::size_t>(j + 1)].col(c) = z.col(c) / b;
      }
    }
  }

  const double root_n = std::sqrt(static_cast<double>(n));
  std::vector<double> terms(static_cast<std::size_t>(s));
  for (Index c = 0; c < s; ++c) {
    const int k = steps[static_cast<std::size_t>(c)];
    const Vec p = tridiag_alpha_first_column(gam.col(c).head(k), k > 1 ? Vec(bet.col(c).head(k - 1)) : Vec(0), alpha);
    double f = 0.0;
    for (int i = 0; i < k; ++i) {
      f += p(i) * batch.vectors.col(c).dot(q[static_cast<std::size_t>(i)].col(c));
    }
    if (!std::isfinite(f)) throw NumericError("non-finite quadrature term");
    terms[static_cast<std::size_t>(c)] = root_n * f;
  }
  return terms;
}

EntropyEstimate lanczos_entropy(const SpectralOperator& op, const EstimatorConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const SketchBatch batch =
      sample_sketch(op.order(), config.sketches, Probe::Rademacher, config.seed);
  const std::vector<double> terms =
      lanczos_quadrature_terms(op, config.alpha, config.degree, batch);
  double sum = 0.0;
  for (double t : terms) sum += t;
  const double mean = sum / static_cast<double>(terms.size());
  if (!(mean > 0.0)) {
    throw CollapsedEstimateError("trace estimate collapsed to a non-positive value");
  }
  EntropyEstimate out;
  out.bits = std::log2(mean) / (1.0 - config.alpha);
  out.method = "lanczos";
  out.alpha = config.alpha;
  out.sketches = config.sketches;
  out.degree = config.degree;
  out.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace rentropy
