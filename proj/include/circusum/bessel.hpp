#pragma once

// Modified Bessel functions needed for von Mises concentration and the
// Student-t characteristic function. I0/I1 use the power series below
// x = 15 and the large-argument expansion above it; every ratio is formed
// from exponentially scaled values so nothing overflows at large kappa.

#include <cmath>
#include <limits>
#include <string>

#include "errors.hpp"
#include "quadrature.hpp"
#include "roots.hpp"

namespace circusum {

namespace detail {

inline constexpr double bessel_series_cutoff = 15.0;

// sum_k (x/2)^(2k+nu) / (k! (k+nu)!) for nu in {0, 1}
inline double bessel_i_series(int nu, double x) {
  const double q = 0.25 * x * x;
  double term = nu == 0 ? 1.0 : 0.5 * x;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + nu));
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

// e^{-x} I_nu(x) from the large-argument expansion.
inline double bessel_i_scaled_asymptotic(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (static_cast<double>(k) * 8.0 * x);
    const double mag = std::abs(term);
    if (mag > prev) break;  // asymptotic series started diverging
    sum += term;
    prev = mag;
    if (mag < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * 3.14159265358979323846 * x);
}

inline void require_nonnegative(double x, const char* who) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw invalid_input(std::string(who) + ": argument must be finite and >= 0");
}

}  // namespace detail

/// e^{-x} I_0(x)
inline double bessel_i0_scaled(double x) {
  detail::require_nonnegative(x, "bessel_i0_scaled");
  if (x < detail::bessel_series_cutoff) return std::exp(-x) * detail::bessel_i_series(0, x);
  return detail::bessel_i_scaled_asymptotic(0, x);
}

/// e^{-x} I_1(x)
inline double bessel_i1_scaled(double x) {
  detail::require_nonnegative(x, "bessel_i1_scaled");
  if (x < detail::bessel_series_cutoff) return std::exp(-x) * detail::bessel_i_series(1, x);
  return detail::bessel_i_scaled_asymptotic(1, x);
}

inline double bessel_i0(double x) {
  detail::require_nonnegative(x, "bessel_i0");
  if (x < detail::bessel_series_cutoff) return detail::bessel_i_series(0, x);
  return std::exp(x) * detail::bessel_i_scaled_asymptotic(0, x);
}

inline double bessel_i1(double x) {
  detail::require_nonnegative(x, "bessel_i1");
  if (x < detail::bessel_series_cutoff) return detail::bessel_i_series(1, x);
  return std::exp(x) * detail::bessel_i_scaled_asymptotic(1, x);
}

/// A(kappa) = I1(kappa) / I0(kappa), the mean resultant length of a
/// von Mises distribution.
inline double a_ratio(double kappa) {
  detail::require_nonnegative(kappa, "a_ratio");
  if (kappa == 0.0) return 0.0;
  if (kappa < detail::bessel_series_cutoff) return detail::bessel_i_series(1, kappa) / detail::bessel_i_series(0, kappa);
  return detail::bessel_i_scaled_asymptotic(1, kappa) / detail::bessel_i_scaled_asymptotic(0, kappa);
}

/// Inverse of a_ratio on [0, 1) by bracketed bisection, starting from
/// [0, 700] and widening the upper end when r is closer to 1 than A(700).
inline double a_inverse(double r) {
  if (!(r >= 0.0) || !(r < 1.0)) throw invalid_input("a_inverse: argument must lie in [0, 1), got " + std::to_string(r));
  if (r == 0.0) return 0.0;
  double hi = 700.0;
  while (a_ratio(hi) <= r) {
    hi *= 2.0;
    if (hi > 1e15) throw numeric_failure("a_inverse: argument too close to 1");
  }
  return bisect([r](double k) { return a_ratio(k) - r; }, 0.0, hi, 1e-15);
}

namespace detail {

inline bool is_half_integer(double nu) {
  const double twice = 2.0 * nu;
  return std::abs(twice - std::round(twice)) < 1e-14 && static_cast<long>(std::round(twice)) % 2 != 0;
}

// K_{n+1/2}(x) by upward recurrence from K_{1/2} and K_{3/2}.
inline double bessel_k_half_integer(double nu, double x) {
  const double k_half = std::sqrt(3.14159265358979323846 / (2.0 * x)) * std::exp(-x);
  if (nu < 1.0) return k_half;
  double k_prev = k_half;
  double k_cur = k_half * (1.0 + 1.0 / x);
  for (double order = 1.5; order + 0.5 < nu + 1e-9; order += 1.0) {
    const double k_next = k_prev + (2.0 * order / x) * k_cur;
    k_prev = k_cur;
    k_cur = k_next;
  }
  return k_cur;
}

// e^{x} K_nu(x) = int_0^inf exp(-x (cosh t - 1)) cosh(nu t) dt
inline double bessel_k_scaled_integral(double nu, double x) {
  auto log_integrand = [nu, x](double t) {
    // log cosh(nu t) without overflow
    const double a = nu * t;
    return -x * (std::cosh(t) - 1.0) + a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
  };
  // Locate the peak and a cutoff 50 e-folds below it.
  double peak = log_integrand(0.0);
  double t = 0.0;
  const double step = 0.125;
  while (true) {
    t += step;
    const double v = log_integrand(t);
    if (v > peak) peak = v;
    if (v < peak - 50.0) break;
    if (t > 200.0) break;
  }
  const double upper = t;
  auto f = [&](double s) { return std::exp(log_integrand(s)); };
  // Coarse pass to size the absolute tolerance for a relative target.
  const double rough = integrate(f, 0.0, upper, std::exp(peak) * 1e-6, 12);
  return integrate(f, 0.0, upper, std::abs(rough) * 1e-14, 40);
}

}  // namespace detail

/// Modified Bessel function of the second kind. Half-integer orders use the
/// closed form, everything else the cosh integral representation.
inline double bessel_k(double nu, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw invalid_input("bessel_k: x must be finite and > 0");
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw invalid_input("bessel_k: order must be finite and >= 0");
  if (detail::is_half_integer(nu)) return detail::bessel_k_half_integer(nu, x);
  return std::exp(-x) * detail::bessel_k_scaled_integral(nu, x);
}

}  // namespace circusum
