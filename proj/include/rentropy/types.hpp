#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rentropy {

// Dense row-major matrix: Gram matrices and kernel blocks.
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
// Column-major matrix: sketch batches and Krylov bases (contiguous columns).
using ColMat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Index = Eigen::Index;

// Raised when an estimator or decomposition fails numerically (as opposed to
// a caller contract violation, which raises std::invalid_argument).
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Sketch average of a quantity that must be positive came out <= 0.
struct CollapsedEstimateError : NumericError {
  explicit CollapsedEstimateError(const std::string& what) : NumericError(what) {}
};

// An eigenvalue or Ritz value fell below the PSD tolerance.
struct NotPsdError : NumericError {
  explicit NotPsdError(const std::string& what) : NumericError(what) {}
};

// Eigenvalues more negative than this are treated as a real PSD violation;
// anything in [kPsdTol, 0) is rounding noise and clamps to zero.
inline constexpr double kPsdTol = -1e-10;

// Half-open guard band around alpha = 1 where 1/(1-alpha) is unusable.
inline constexpr double kAlphaOneGuard = 1e-6;

struct SampleSet {
  RowMat x;  // n samples by d features, one sample per row

  Index n() const { return x.rows(); }
  Index d() const { return x.cols(); }
};

enum class KernelFamily { Gaussian, Polynomial };

// Gaussian: k(x,y) = exp(-|x-y|^2 / (2 sigma^2)).
// Polynomial: k(x,y) = (x'y + shift)^degree.
struct KernelSpec {
  KernelFamily family = KernelFamily::Gaussian;
  double sigma = 1.0;
  double shift = 1.0;
  int degree = 2;

  bool shift_invariant() const { return family == KernelFamily::Gaussian; }
  std::string name() const;
};

void validate_kernel(const KernelSpec& spec);

// Normalized Gram matrix: symmetric PSD, diagonal exactly 1/n, trace 1.
struct GramMatrix {
  RowMat g;

  Index n() const { return g.rows(); }
};

// Eigenvalues sorted in non-increasing order; round-off negatives above
// kPsdTol are clamped to zero.
struct Spectrum {
  Vec lambda;

  Index n() const { return lambda.size(); }
};

struct EstimatorConfig {
  double alpha = 2.0;
  int sketches = 100;   // s
  int degree = 30;      // m (polynomial degree or Lanczos steps)
  std::uint64_t seed = 0;
  double delta = 0.1;   // failure probability for sketch-count formulas
  double epsilon = 0.3; // relative trace accuracy for sketch-count formulas

  // Throws std::invalid_argument on out-of-domain parameters. alpha within
  // kAlphaOneGuard of 1 is rejected everywhere.
  void validate() const;
};

struct TermRecord {
  std::string label;
  double bits = 0.0;
};

struct EntropyEstimate {
  double bits = 0.0;
  std::string method;
  double alpha = 0.0;
  int sketches = 0;          // 0 for the exact path
  int degree = 0;            // 0 when the method has no series/steps parameter
  double elapsed_s = 0.0;
  std::vector<TermRecord> terms;  // constituent entropies for MI / TC
};

}  // namespace rentropy
