#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace circusum {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Reduces a finite angle in radians to [-pi, pi). pi itself maps to -pi.
inline double wrap_radians(double x) noexcept {
  double r = x - two_pi * std::floor((x + pi) / two_pi);
  if (r >= pi) r -= two_pi;
  if (r < -pi) r += two_pi;
  return r;
}

/// A direction on the circle, held in [-pi, pi).
class Angle {
 public:
  constexpr Angle() noexcept = default;

  static Angle from_radians(double x) {
    if (!std::isfinite(x)) throw invalid_input("angle must be finite, got " + std::to_string(x));
    return Angle(wrap_radians(x));
  }
  static Angle from_degrees(double deg) { return from_radians(deg * (pi / 180.0)); }

  constexpr double radians() const noexcept { return value_; }
  /// Degrees in [0, 360), the clock-face convention used in reports.
  double degrees_positive() const noexcept {
    double d = value_ * (180.0 / pi);
    return d < 0.0 ? d + 360.0 : d;
  }

  Angle rotated(double delta) const { return from_radians(value_ + delta); }
  Angle reflected() const { return from_radians(-value_); }

  friend constexpr bool operator==(Angle, Angle) = default;

 private:
  explicit constexpr Angle(double v) noexcept : value_(v) {}
  double value_ = 0.0;
};

inline Angle normalize_angle(double x) { return Angle::from_radians(x); }

/// Four-quadrant inverse tangent with the sine-sum FIRST and the cosine-sum
/// second, i.e. the same order as std::atan2(y, x) once one reads the first
/// argument as the vertical component.
///
///   tan^-1(s/c)               c > 0
///   tan^-1(s/c) + pi sign(s)  c < 0   (s = 0 taken as +pi)
///   (pi/2) sign(s)            c = 0, s != 0
///   0                         c = s = 0
inline Angle four_quadrant_atan(double sine_part, double cosine_part) {
  if (!std::isfinite(sine_part) || !std::isfinite(cosine_part))
    throw invalid_input("four_quadrant_atan: non-finite argument");
  if (cosine_part > 0.0) return Angle::from_radians(std::atan(sine_part / cosine_part));
  if (cosine_part < 0.0) {
    double base = std::atan(sine_part / cosine_part);
    return Angle::from_radians(sine_part < 0.0 ? base - pi : base + pi);
  }
  if (sine_part > 0.0) return Angle::from_radians(pi / 2.0);
  if (sine_part < 0.0) return Angle::from_radians(-pi / 2.0);
  return Angle{};
}

}  // namespace circusum
