#pragma once

#include <optional>
#include <vector>

#include "rentropy/types.hpp"

namespace rentropy {

enum class Method { Exact, Integer, Taylor, Chebyshev, Lanczos };
enum class Representation { Dense, BlockLowRank };

const char* method_name(Method m);

struct Variable {
  SampleSet samples;
  KernelSpec kernel;
};

// Inputs for the composed measures. All variables must share the sample
// count. clusters/lowrank of 0 mean the n-derived defaults; they only matter
// for the block low-rank representation.
struct MeasureRequest {
  std::vector<Variable> variables;
  std::optional<Variable> target;
  Method method = Method::Exact;
  Representation representation = Representation::Dense;
  EstimatorConfig config;
  int clusters = 0;
  int lowrank = 0;
};

class SpectralOperator;

// Dispatches the non-exact estimators on an operator.
EntropyEstimate operator_entropy(const SpectralOperator& op, Method method,
                                 const EstimatorConfig& config);

// Joint entropy of req.variables (Hadamard-combined for the dense
// representation, concatenated sigma-scaled features for block low-rank).
// Bit-for-bit invariant to the ordering of the variable list.
EntropyEstimate entropy(const MeasureRequest& req);

// S(variables) + S(target) - S(variables, target). The three terms run with
// the same seed, so the sketch probes are shared and their errors partially
// cancel in the difference. Terms are recorded in the result metadata.
EntropyEstimate mutual_information(const MeasureRequest& req);

// sum_i S(variable_i) - S(all variables jointly). For two variables this is
// exactly mutual_information of the pair.
EntropyEstimate total_correlation(const MeasureRequest& req);

// Forward selection maximizing I({selected, candidate}; labels) at every
// step. Tie scores go to the lowest feature index. The template supplies
// method, representation, config, the feature kernel (tmpl.variables[0]) and
// optionally the label kernel (tmpl.target).
std::vector<Index> greedy_feature_selection(const SampleSet& features, const SampleSet& labels,
                                            int count, const MeasureRequest& tmpl);

}  // namespace rentropy
