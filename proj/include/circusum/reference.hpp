#pragma once

#include <cmath>
#include <numbers>
#include <span>

#include "angle.hpp"
#include "errors.hpp"
#include "roots.hpp"
#include "trig_accumulator.hpp"

namespace circusum {

/// zeta_hat = (delta0/2) * mean sin(X_j + delta0 - nu_m) / sqrt(mean sin^2(X_j - nu_m)),
/// the reference value tuned to a rotation of size delta0, estimated from
/// in-control Phase I data.
inline double estimate_reference_constant(std::span<const Angle> phase1, double delta0) {
  if (phase1.size() < 2) throw invalid_input("estimate_reference_constant: need at least two Phase I observations");
  if (!(delta0 > 0.0 && delta0 <= std::numbers::pi)) throw invalid_input("estimate_reference_constant: delta0 must lie in (0, pi]");
  const Angle nu = TrigAccumulator::from(phase1).mean_direction();
  double shifted = 0.0, sin_sq = 0.0;
  for (Angle x : phase1) {
    const double d = x.radians() - nu.radians();
    shifted += std::sin(d + delta0);
    sin_sq += std::sin(d) * std::sin(d);
  }
  const double m = static_cast<double>(phase1.size());
  const double spread = std::sqrt(sin_sq / m);
  if (!(spread > 1e-12)) throw numeric_failure("estimate_reference_constant: Phase I sample has no spread about its mean direction");
  return 0.5 * delta0 * (shifted / m) / spread;
}

struct DeltaSolution {
  double delta0 = std::numbers::pi;
  bool found = false;
};

/// Smallest delta0 in (0, pi] with estimate_reference_constant = zeta_cap.
/// If the cap is never reached, returns pi with found = false.
inline DeltaSolution solve_delta_for_zeta(std::span<const Angle> phase1, double zeta_cap) {
  if (!(zeta_cap > 0.0) || !std::isfinite(zeta_cap)) throw invalid_input("solve_delta_for_zeta: zeta_cap must be finite and > 0");
  auto f = [&](double d) { return estimate_reference_constant(phase1, d) - zeta_cap; };
  constexpr int grid = 2048;
  double prev_x = std::numbers::pi / grid;
  double prev_f = f(prev_x);
  if (prev_f >= 0.0) return {bisect(f, 1e-300, prev_x, 1e-15), true};
  for (int i = 2; i <= grid; ++i) {
    const double x = std::numbers::pi * i / grid;
    const double fx = f(x);
    if (fx >= 0.0) return {bisect(f, prev_x, x, 1e-15), true};
    prev_x = x;
    prev_f = fx;
  }
  return {};
}

}  // namespace circusum
