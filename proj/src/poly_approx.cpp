#include "rentropy/poly_approx.hpp"

#include <chrono>
#include <cmath>

#include "rentropy/special.hpp"

namespace rentropy {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
}

void check_fractional_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
  if (std::abs(alpha - std::round(alpha)) <= 1e-9)
    throw std::invalid_argument("degree formulas are defined for non-integer alpha");
}

int finish_degree(double raw, double alpha) {
  if (!(raw < 2e9)) throw NumericError("series degree overflows practical range");
  const int floor_m = static_cast<int>(std::ceil(alpha)) + 1;
  const int m = static_cast<int>(std::ceil(raw));
  return m < floor_m ? floor_m : m;
}

double require_lambda(const SpectralOperator& op, const EstimatorConfig& config,
                      const std::optional<double>& hint) {
  double lam = 0.0;
  if (hint) {
    lam = *hint;
  } else {
    lam = power_iteration(op, 1000, 1e-8, config.seed).lambda;
  }
  if (!(lam > 0.0)) throw NumericError("estimated lambda_max is not positive");
  return lam;
}

double entropy_from_mean(const std::vector<double>& forms, double alpha, const char* method) {
  double acc = 0.0;
  for (double f : forms) acc += f;  // fixed column order
  const double mean = acc / static_cast<double>(forms.size());
  if (!(mean > 0.0))
    throw CollapsedEstimateError(std::string(method) +
                                 ": estimate collapsed, mean quadratic form is not positive");
  return std::log2(mean) / (1.0 - alpha);
}

}  // namespace

TaylorPlan taylor_plan(double alpha, double lambda_max, int m) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(lambda_max > 0.0)) throw std::invalid_argument("lambda_max must be positive");
  if (m < 0) throw std::invalid_argument("degree must be >= 0");

  TaylorPlan plan;
  plan.alpha = alpha;
  plan.lambda_max = lambda_max;
  plan.degree = m;
  plan.coeff.resize(static_cast<std::size_t>(m) + 1);
  plan.coeff[0] = 1.0;
  for (int i = 0; i < m; ++i)
    plan.coeff[static_cast<std::size_t>(i) + 1] =
        plan.coeff[static_cast<std::size_t>(i)] * (alpha - i) / (i + 1.0);
  return plan;
}

ChebyshevPlan chebyshev_coefficients(double alpha, double lambda_max, int m) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(lambda_max > 0.0)) throw std::invalid_argument("lambda_max must be positive");
  if (m < 1) throw std::invalid_argument("degree must be >= 1");

  ChebyshevPlan plan;
  plan.alpha = alpha;
  plan.lambda_max = lambda_max;
  plan.degree = m;
  plan.coeff.resize(static_cast<std::size_t>(m) + 1);
  // Direct Gamma ratios overflow for large k; the term ratio
  // (alpha-k)/(alpha+k+1) is exact and stable.
  plan.coeff[0] = 2.0 * std::pow(lambda_max, alpha) * std::tgamma(alpha + 0.5) /
                  (std::sqrt(kPi) * std::tgamma(alpha + 1.0));
  for (int k = 0; k < m; ++k)
    plan.coeff[static_cast<std::size_t>(k) + 1] =
        plan.coeff[static_cast<std::size_t>(k)] * (alpha - k) / (alpha + k + 1.0);
  return plan;
}

int taylor_degree(double eps, double alpha, ConditionNumber cond) {
  check_eps(eps);
  check_fractional_alpha(alpha);
  if (!(cond.kappa > 1.0)) throw std::invalid_argument("kappa must exceed 1");

  const double beta = -std::log1p(-1.0 / cond.kappa) / (alpha + 1.0);
  const double arg =
      cond.kappa * beta * std::pow(std::tgamma(alpha + 1.0) / (eps * kPi), 1.0 / (alpha + 1.0));
  return finish_degree(alpha + lambert_w0(arg) / beta, alpha);
}

int taylor_degree(double eps, double alpha, RankDeficient rd) {
  check_eps(eps);
  check_fractional_alpha(alpha);
  if (rd.n < 1) throw std::invalid_argument("n must be >= 1");
  const double raw =
      alpha + std::pow(static_cast<double>(rd.n) * std::tgamma(alpha + 1.0) / (eps * kPi), 1.0 / alpha);
  return finish_degree(raw, alpha);
}

int chebyshev_degree(double eps, double alpha, ConditionNumber cond) {
  check_eps(eps);
  check_fractional_alpha(alpha);
  if (!(cond.kappa > 1.0)) throw std::invalid_argument("kappa must exceed 1");
  const double factor = std::pow(
      std::tgamma(alpha + 0.5) * std::tgamma(alpha) / (eps * std::pow(kPi, 1.5)), 1.0 / (2.0 * alpha));
  return finish_degree(alpha + std::sqrt(cond.kappa) * factor, alpha);
}

int chebyshev_degree(double eps, double alpha, RankDeficient rd) {
  check_eps(eps);
  check_fractional_alpha(alpha);
  if (rd.n < 1) throw std::invalid_argument("n must be >= 1");
  const double raw =
      alpha + std::pow(static_cast<double>(rd.n) * std::tgamma(alpha + 0.5) * std::tgamma(alpha) /
                           (eps * std::pow(kPi, 1.5)),
                       1.0 / (2.0 * alpha));
  return finish_degree(raw, alpha);
}

double taylor_scalar(const TaylorPlan& plan, double lambda) {
  const double x = lambda / plan.lambda_max - 1.0;
  double acc = 0.0;
  double xp = 1.0;
  for (std::size_t k = 0; k < plan.coeff.size(); ++k) {
    acc += plan.coeff[k] * xp;
    xp *= x;
  }
  return std::pow(plan.lambda_max, plan.alpha) * acc;
}

double chebyshev_scalar(const ChebyshevPlan& plan, double lambda) {
  const double u = 2.0 * lambda / plan.lambda_max - 1.0;
  double y1 = 0.0, y2 = 0.0, y0 = 0.0;
  for (int k = plan.degree; k >= 0; --k) {
    const double ck =
        k == 0 ? 0.5 * plan.coeff[0] : plan.coeff[static_cast<std::size_t>(k)];
    y0 = ck + 2.0 * u * y1 - y2;
    if (k > 0) {
      y2 = y1;
      y1 = y0;
    }
  }
  return 0.25 * plan.coeff[0] + 0.5 * (y0 - y2);
}

std::vector<double> clenshaw_quadratic_forms(const SpectralOperator& op, const ChebyshevPlan& plan,
                                             const SketchBatch& batch) {
  if (batch.n() != op.order()) throw std::invalid_argument("batch rows must match operator order");
  const Index n = batch.n();
  const Index s = batch.vectors.cols();
  const double inv_lam = 1.0 / plan.lambda_max;

  // y_k = c'_k g + (4/lambda) G y_{k+1} - 2 y_{k+1} - y_{k+2}, run from k=m
  // down to 0. The k=0 step takes c0/2 (the series' constant term is c0/2),
  // which the closing c0<g,g>/4 correction assumes.
  ColMat y1 = ColMat::Zero(n, s), y2 = ColMat::Zero(n, s), y0(n, s), gy(n, s);
  for (int k = plan.degree; k >= 0; --k) {
    const double ck =
        k == 0 ? 0.5 * plan.coeff[0] : plan.coeff[static_cast<std::size_t>(k)];
    if (k == plan.degree) {
      y0 = ck * batch.vectors;  // y_{m+1} = y_{m+2} = 0
    } else {
      op.apply_block(y1, gy);
      y0 = ck * batch.vectors + 4.0 * inv_lam * gy - 2.0 * y1 - y2;
    }
    if (k > 0) {
      y2.swap(y1);
      y1.swap(y0);
    }
  }

  std::vector<double> forms(static_cast<std::size_t>(s));
  for (Index c = 0; c < s; ++c) {
    const auto g = batch.vectors.col(c);
    forms[static_cast<std::size_t>(c)] =
        0.25 * plan.coeff[0] * g.dot(g) + 0.5 * g.dot(y0.col(c) - y2.col(c));
  }
  return forms;
}

EntropyEstimate taylor_entropy(const SpectralOperator& op, const EstimatorConfig& config,
                               std::optional<double> lambda_hint) {
  config.validate();
  if (!(config.degree > config.alpha))
    throw std::invalid_argument("taylor estimator needs degree m > alpha");

  const auto t0 = std::chrono::steady_clock::now();
  const double lam = require_lambda(op, config, lambda_hint);
  const TaylorPlan plan = taylor_plan(config.alpha, lam, config.degree);
  const SketchBatch batch = sample_sketch(op.order(), config.sketches, Probe::Gaussian, config.seed);

  const Index s = batch.vectors.cols();
  std::vector<double> acc(static_cast<std::size_t>(s));
  for (Index c = 0; c < s; ++c)
    acc[static_cast<std::size_t>(c)] = plan.coeff[0] * batch.vectors.col(c).squaredNorm();

  // w <- (G/lambda - I) w per term, accumulating C(alpha,t) <g, w>.
  ColMat w = batch.vectors, gw;
  const double inv_lam = 1.0 / lam;
  for (int t = 1; t <= plan.degree; ++t) {
    op.apply_block(w, gw);
    w = inv_lam * gw - w;
    const double ct = plan.coeff[static_cast<std::size_t>(t)];
    for (Index c = 0; c < s; ++c)
      acc[static_cast<std::size_t>(c)] += ct * batch.vectors.col(c).dot(w.col(c));
  }
  const double scale = std::pow(lam, config.alpha);
  for (double& a : acc) a *= scale;

  EntropyEstimate est;
  est.bits = entropy_from_mean(acc, config.alpha, "taylor");
  est.method = "taylor";
  est.alpha = config.alpha;
  est.sketches = config.sketches;
  est.degree = config.degree;
  est.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return est;
}

EntropyEstimate chebyshev_entropy(const SpectralOperator& op, const EstimatorConfig& config,
                                  std::optional<double> lambda_hint) {
  config.validate();
  if (!(config.degree > config.alpha))
    throw std::invalid_argument("chebyshev estimator needs degree m > alpha");

  const auto t0 = std::chrono::steady_clock::now();
  const double lam = require_lambda(op, config, lambda_hint);
  const ChebyshevPlan plan = chebyshev_coefficients(config.alpha, lam, config.degree);
  const SketchBatch batch = sample_sketch(op.order(), config.sketches, Probe::Gaussian, config.seed);
  const std::vector<double> forms = clenshaw_quadratic_forms(op, plan, batch);

  EntropyEstimate est;
  est.bits = entropy_from_mean(forms, config.alpha, "chebyshev");
  est.method = "chebyshev";
  est.alpha = config.alpha;
  est.sketches = config.sketches;
  est.degree = config.degree;
  est.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return est;
}

}  // namespace rentropy
