#include "rentropy/special.hpp"

#include <cmath>
#include <stdexcept>

namespace rentropy {

double lambert_w0(double z) {
  if (!(z >= 0.0) || !std::isfinite(z)) throw std::invalid_argument("lambert_w0 needs finite z >= 0");
  if (z == 0.0) return 0.0;

  double w = std::log1p(z);
  for (int it = 0; it < 50; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    const double step = f / (ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0));
    w -= step;
    if (std::abs(step) <= 1e-12 * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace rentropy
