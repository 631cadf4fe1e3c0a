#include "rentropy/types.hpp"

#include <cmath>

namespace rentropy {

std::string KernelSpec::name() const {
  return family == KernelFamily::Gaussian ? "gaussian" : "polynomial";
}

void EstimatorConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("alpha must be positive and finite");
  if (std::abs(alpha - 1.0) < kAlphaOneGuard)
    throw std::invalid_argument("alpha too close to 1; the 1/(1-alpha) prefactor is unusable");
  if (sketches < 1) throw std::invalid_argument("sketch count must be >= 1");
  if (degree < 1) throw std::invalid_argument("degree must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0,1)");
}

}  // namespace rentropy
