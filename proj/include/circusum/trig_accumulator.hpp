#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

#include "angle.hpp"
#include "bessel.hpp"
#include "errors.hpp"

namespace circusum {

/// Raw trigonometric sums over X_1..X_n. Nothing is normalised by n on the
/// way in, so push() is an exact recursion.
struct TrigAccumulator {
  std::size_t n = 0;
  double C = 0.0;   // sum cos
  double S = 0.0;   // sum sin
  double C2 = 0.0;  // sum cos^2
  double S2 = 0.0;  // sum sin^2
  double A2 = 0.0;  // sum sin*cos

  void push(double radians) noexcept {
    const double s = std::sin(radians);
    const double c = std::cos(radians);
    ++n;
    C += c;
    S += s;
    C2 += c * c;
    S2 += s * s;
    A2 += s * c;
  }
  void push(Angle x) noexcept { push(x.radians()); }

  static TrigAccumulator from(std::span<const Angle> xs) noexcept {
    TrigAccumulator acc;
    for (Angle x : xs) acc.push(x);
    return acc;
  }

  double resultant_length() const noexcept { return std::hypot(C, S); }
  Angle mean_direction() const { return four_quadrant_atan(S, C); }
  /// Mean direction undefined: the resultant vector is exactly zero.
  bool degenerate_direction() const noexcept { return C == 0.0 && S == 0.0; }
};

inline Angle mean_direction(const TrigAccumulator& acc) {
  if (acc.n == 0) throw invalid_input("mean_direction: empty accumulator");
  return acc.mean_direction();
}

inline double resultant_length(const TrigAccumulator& acc) {
  if (acc.n == 0) throw invalid_input("resultant_length: empty accumulator");
  return acc.resultant_length();
}

/// kappa_hat = A^-1(R/n). Returns +infinity when R/n reaches 1 (all points
/// coincide), which callers treat as "unbounded concentration".
inline double sample_concentration(const TrigAccumulator& acc) {
  if (acc.n < 2) throw invalid_input("sample_concentration: need at least two observations");
  const double rbar = acc.resultant_length() / static_cast<double>(acc.n);
  if (rbar >= 1.0 - 1e-15) return std::numeric_limits<double>::infinity();
  return a_inverse(rbar);
}

}  // namespace circusum
