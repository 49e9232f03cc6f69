#pragma once

#include <cmath>
#include <cstddef>

namespace essaylens {

struct ScalarOptimum {
  double x = 0;
  double value = 0;
  std::size_t iterations = 0;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
/// Stops when the bracket is narrower than tol or after max_iter steps.
template <typename F>
ScalarOptimum golden_section_maximize(F&& f, double lo, double hi, double tol = 1e-6, std::size_t max_iter = 200) {
  constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  std::size_t it = 0;
  while (b - a > tol && it < max_iter) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
    ++it;
  }
  const double x = 0.5 * (a + b);
  return {x, f(x), it};
}

}  // namespace essaylens
