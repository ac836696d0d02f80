#pragma once

#include <cmath>
#include <string>

#include "errors.hpp"

namespace circusum {

/// Bisection for a sign change of f on [lo, hi]. Throws if the endpoints
/// do not bracket a root.
template <class F>
double bisect(F&& f, double lo, double hi, double x_tol = 1e-13, int max_iter = 300) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw numeric_failure("bisect: no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  for (int it = 0; it < max_iter && hi - lo > x_tol * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace circusum
