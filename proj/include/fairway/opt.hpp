#pragma once

#include <cmath>

namespace fairway {

// Golden-section search for the minimum of a unimodal f on [a, b].
// Returns the midpoint of the final bracket; |result - argmin| <= tol.
template <class F>
double golden_section_min(F&& f, double a, double b, double tol = 1e-6,
                          int max_iter = 200) {
  constexpr double inv_phi = 0.6180339887498948482;  // (sqrt(5) - 1) / 2
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

template <class F>
double golden_section_max(F&& f, double a, double b, double tol = 1e-6,
                          int max_iter = 200) {
  return golden_section_min([&](double x) { return -f(x); }, a, b, tol,
                            max_iter);
}

}  // namespace fairway
