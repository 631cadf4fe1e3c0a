#pragma once

#include <optional>
#include <vector>

#include "rentropy/operators.hpp"
#include "rentropy/sketch.hpp"
#include "rentropy/types.hpp"

namespace rentropy {

// Strong parameter types for the two degree-formula branches: a known
// condition number (lambda_min > 0) versus a rank-deficient spectrum where
// only the matrix order bounds the error.
struct ConditionNumber {
  double kappa;
};
struct RankDeficient {
  Index n;
};

struct TaylorPlan {
  double alpha = 0.0;
  double lambda_max = 0.0;
  int degree = 0;
  std::vector<double> coeff;  // C(alpha, 0..m), exact by recurrence
};

struct ChebyshevPlan {
  double alpha = 0.0;
  double lambda_max = 0.0;
  int degree = 0;
  std::vector<double> coeff;  // c_0..c_m; the series is c0/2 + sum_{k>=1} c_k T_k
};

TaylorPlan taylor_plan(double alpha, double lambda_max, int m);

// c_{k+1} = c_k (alpha-k)/(alpha+k+1) from c_0 = 2 lambda_max^alpha
// Gamma(alpha+1/2) / (sqrt(pi) Gamma(alpha+1)).
ChebyshevPlan chebyshev_coefficients(double alpha, double lambda_max, int m);

// Truncation degrees guaranteeing per-eigenvalue error <= eps * lambda_min^alpha
// (condition-number branch) or <= eps/n * lambda_max^alpha-scale (rank-deficient
// branch). Both floor at ceil(alpha)+1.
int taylor_degree(double eps, double alpha, ConditionNumber cond);
int taylor_degree(double eps, double alpha, RankDeficient rd);
int chebyshev_degree(double eps, double alpha, ConditionNumber cond);
int chebyshev_degree(double eps, double alpha, RankDeficient rd);

// Scalar evaluations of the truncated series; diagnostics and fidelity tests.
double taylor_scalar(const TaylorPlan& plan, double lambda);
double chebyshev_scalar(const ChebyshevPlan& plan, double lambda);

// Per-column <g, f_m(G) g> via the Clenshaw recurrence; coefficient plans of
// any degree >= 0 are accepted.
std::vector<double> clenshaw_quadratic_forms(const SpectralOperator& op, const ChebyshevPlan& plan,
                                             const SketchBatch& batch);

// Algorithm entry points. lambda_hint, when present, replaces the internal
// power-iteration estimate of lambda_max (it must upper-bound the spectrum).
EntropyEstimate taylor_entropy(const SpectralOperator& op, const EstimatorConfig& config,
                               std::optional<double> lambda_hint = std::nullopt);
EntropyEstimate chebyshev_entropy(const SpectralOperator& op, const EstimatorConfig& config,
                                  std::optional<double> lambda_hint = std::nullopt);

}  // namespace rentropy
