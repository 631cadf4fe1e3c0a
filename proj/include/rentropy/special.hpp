#pragma once

namespace rentropy {

// Principal branch of the Lambert W function, w e^w = z, for z >= 0.
// Halley iteration from w0 = log(1+z); tolerance 1e-12, at most 50 steps.
double lambert_w0(double z);

}  // namespace rentropy
