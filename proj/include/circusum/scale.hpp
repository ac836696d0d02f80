#pragma once

// Scale standardisation: pick the pre-wrap scale sigma so that the wrapped
// variable (sigma*Y) mod 2pi has first trigonometric moment A(kappa), i.e.
// the same mean resultant length as a von Mises(kappa).

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "bessel.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "roots.hpp"

namespace circusum {

namespace detail {
inline void require_positive_kappa(double kappa, const char* who) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw invalid_input(std::string(who) + ": kappa must be finite and > 0");
}

// Bracket [lo, hi] with f(lo) > 0 > f(hi) for a decreasing f, doubling hi.
template <class F>
double expand_upper(F& f, double hi, double cap, const char* who) {
  while (f(hi) > 0.0) {
    hi *= 2.0;
    if (hi > cap) throw numeric_failure(std::string(who) + ": no sign change below " + std::to_string(cap));
  }
  return hi;
}
}  // namespace detail

/// |E exp(itY)| for Y symmetric stable with characteristic function exp(-|t|^alpha).
inline double stable_cf_modulus(double alpha, double t) { return std::exp(-std::pow(std::abs(t), alpha)); }

/// E cos(tY) for Y ~ Student t with `df` degrees of freedom.
inline double student_cf(double df, double t) {
  t = std::abs(t);
  if (t == 0.0) return 1.0;
  const double z = std::sqrt(df) * t;
  const double half = 0.5 * df;
  // K(z) z^half / (2^(half-1) Gamma(half)), assembled in logs
  const double log_value = std::log(bessel_k(half, z)) + half * std::log(z) - (half - 1.0) * std::numbers::ln2 - std::lgamma(half);
  return std::exp(log_value);
}

/// Characteristic function of the Azzalini skew-normal SN(lambda):
/// exp(-t^2/2) (1 + i T(delta t)), T(x) = sqrt(2/pi) int_0^x exp(u^2/2) du.
inline std::complex<double> skew_normal_cf(double lambda, double t) {
  const double delta = std::isinf(lambda) ? (lambda > 0 ? 1.0 : -1.0) : lambda / std::sqrt(1.0 + lambda * lambda);
  const double x = delta * t;
  const double integral = integrate([](double u) { return std::exp(0.5 * u * u); }, 0.0, x, 1e-15);
  return std::exp(-0.5 * t * t) * std::complex<double>(1.0, std::sqrt(2.0 / std::numbers::pi) * integral);
}

/// sigma = (-log A(kappa))^(1/alpha). Also valid for skew-stable laws, whose
/// characteristic function has the same modulus.
inline double solve_stable_scale(double alpha, double kappa) {
  detail::require_positive_kappa(kappa, "solve_stable_scale");
  if (!(alpha > 0.0 && alpha <= 2.0)) throw invalid_input("solve_stable_scale: alpha must lie in (0, 2]");
  return std::pow(-std::log(a_ratio(kappa)), 1.0 / alpha);
}

/// Root of K_{df/2}(sqrt(df) sigma)(sqrt(df) sigma)^{df/2} = 2^{df/2-1} Gamma(df/2) A(kappa).
inline double solve_student_scale(double df, double kappa) {
  detail::require_positive_kappa(kappa, "solve_student_scale");
  if (!(df > 0.0) || !std::isfinite(df)) throw invalid_input("solve_student_scale: df must be finite and > 0");
  const double target = a_ratio(kappa);
  auto f = [&](double s) { return student_cf(df, s) - target; };
  const double hi = detail::expand_upper(f, 4.0, 1e6, "solve_student_scale");
  return bisect(f, 0.0, hi, 1e-15);
}

/// Scale for the wrapped skew-normal: |phi(sigma)| = A(kappa).
inline double solve_skew_normal_scale(double lambda, double kappa) {
  detail::require_positive_kappa(kappa, "solve_skew_normal_scale");
  const double target = a_ratio(kappa);
  auto f = [&](double s) { return std::abs(skew_normal_cf(lambda, s)) - target; };
  const double hi = detail::expand_upper(f, 2.0, 1e3, "solve_skew_normal_scale");
  return bisect(f, 0.0, hi, 1e-14);
}

/// Mean direction of (sigma Y) mod 2pi for Y ~ SN(lambda).
inline double skew_normal_wrapped_mean(double lambda, double sigma) {
  const auto phi = skew_normal_cf(lambda, sigma);
  return std::atan2(phi.imag(), phi.real());
}

/// First trigonometric moment (mean resultant length and mean direction) of
/// the sine-skewed von Mises g(theta)(1 + lambda sin theta), g = vM(0, k).
struct TrigMoment {
  double length;
  double direction;
};
inline TrigMoment sine_skewed_moment(double lambda, double base_kappa) {
  const double a = a_ratio(base_kappa);
  // E_g sin^2 = (1 - I2/I0)/2 = A(k)/k
  const double sin_part = base_kappa > 0.0 ? lambda * a / base_kappa : 0.5 * lambda;
  return {std::hypot(a, sin_part), std::atan2(sin_part, a)};
}

/// Base von Mises concentration giving the sine-skewed law concentration kappa.
inline double solve_sine_skewed_base(double lambda, double kappa) {
  detail::require_positive_kappa(kappa, "solve_sine_skewed_base");
  const double target = a_ratio(kappa);
  auto f = [&](double k) { return target - sine_skewed_moment(lambda, k).length; };
  if (f(0.0) <= 0.0)
    throw numeric_failure("solve_sine_skewed_base: kappa " + std::to_string(kappa) + " is below what lambda alone produces");
  return bisect(f, 0.0, kappa, 1e-14);
}

}  // namespace circusum
