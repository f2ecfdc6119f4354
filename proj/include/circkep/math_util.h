#pragma once

#include <cmath>
#include <stdexcept>

namespace circkep {

inline double sqr(double x) { return x * x; }

// Real power on a non-negative base: 0^x = 0 for x > 0 and 0^0 = 1.
// A negative base is a programming error.
inline double pow_nonneg(double base, double exponent) {
  if (base < 0.0) throw std::logic_error("pow_nonneg: negative base");
  if (base == 0.0) return exponent == 0.0 ? 1.0 : (exponent > 0.0 ? 0.0 : INFINITY);
  if (exponent == 0.0) return 1.0;
  if (exponent == 1.0) return base;
  return std::pow(base, exponent);
}

}  // namespace circkep
