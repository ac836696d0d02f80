#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

#include "angle.hpp"
#include "distribution.hpp"
#include "rng.hpp"
#include "scale.hpp"

namespace circusum {

inline Angle wrap(double y, double sigma) { return normalize_angle(sigma * y); }

inline std::vector<Angle> double_angles(std::span<const Angle> xs) {
  std::vector<Angle> out;
  out.reserve(xs.size());
  for (Angle x : xs) out.push_back(normalize_angle(2.0 * x.radians()));
  return out;
}

namespace variates {

/// Chambers-Mallows-Stuck draw from S(alpha, beta) with characteristic
/// function exp(-|t|^alpha (1 - i beta sign(t) tan(pi alpha / 2))), and the
/// usual log form at alpha = 1.
inline double stable(double alpha, double beta, RngStream& rng) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  const double v = std::numbers::pi * (rng.uniform_open() - 0.5);
  const double w = rng.exponential();
  if (alpha == 1.0) {
    const double shifted = half_pi + beta * v;
    return (shifted * std::tan(v) - beta * std::log(half_pi * w * std::cos(v) / shifted)) / half_pi;
  }
  const double tan_term = beta * std::tan(half_pi * alpha);
  const double b = std::atan(tan_term) / alpha;
  const double s = std::pow(1.0 + tan_term * tan_term, 0.5 / alpha);
  const double av = alpha * (v + b);
  return s * std::sin(av) / std::pow(std::cos(v), 1.0 / alpha) * std::pow(std::cos(v - av) / w, (1.0 - alpha) / alpha);
}

inline double student_t(double df, RngStream& rng) {
  const double z = rng.normal();
  return z / std::sqrt(rng.chi_squared(df) / df);
}

/// Azzalini-Capitanio representation delta|U0| + sqrt(1 - delta^2) U1.
/// lambda = +-inf gives the half-normal limit.
inline double skew_normal(double lambda, RngStream& rng) {
  if (std::isinf(lambda)) {
    const double h = std::abs(rng.normal());
    return lambda > 0 ? h : -h;
  }
  const double delta = lambda / std::sqrt(1.0 + lambda * lambda);
  const double u0 = rng.normal();
  const double u1 = rng.normal();
  return delta * std::abs(u0) + std::sqrt(1.0 - delta * delta) * u1;
}

inline double skew_t(double df, double lambda, RngStream& rng) {
  const double z = skew_normal(lambda, rng);
  return z / std::sqrt(rng.chi_squared(df) / df);
}

/// Best-Fisher rejection sampler for von Mises(0, kappa), in (-pi, pi].
inline double von_mises(double kappa, RngStream& rng) {
  if (kappa < 1e-8) return std::numbers::pi * (2.0 * rng.uniform() - 1.0);
  const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
  const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
  const double r = (1.0 + rho * rho) / (2.0 * rho);
  while (true) {
    const double z = std::cos(std::numbers::pi * rng.uniform());
    const double f = (1.0 + r * z) / (r + z);
    const double c = kappa * (r - f);
    const double u2 = rng.uniform_open();
    if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
      const double theta = std::acos(std::clamp(f, -1.0, 1.0));
      return rng.uniform() < 0.5 ? -theta : theta;
    }
  }
}

}  // namespace variates

/// A validated DistributionSpec with its scale solved and its centring
/// offset computed once. Draws are pure functions of the RngStream.
class Sampler {
 public:
  /// Draws used to standardise families without closed-form moments.
  static constexpr std::size_t calibration_draws = 1'000'000;

  explicit Sampler(DistributionSpec spec) : spec_(std::move(spec)) {
    validate(spec_);
    prepare();
  }

  const DistributionSpec& spec() const noexcept { return spec_; }
  /// Pre-wrap scale (wrapped families) or base von Mises concentration
  /// (von Mises, sine-skewed).
  double scale() const noexcept { return scale_; }
  /// Mean direction of the unshifted variate, subtracted before adding nu.
  double centre_offset() const noexcept { return centre_; }

  /// One draw in radians, already reduced to [-pi, pi).
  double draw(RngStream& rng) const { return wrap_radians(raw(rng) - centre_ + spec_.nu.radians()); }

  std::vector<Angle> sample(std::size_t n, RngStream& rng) const {
    std::vector<Angle> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(Angle::from_radians(draw(rng)));
    return out;
  }

 private:
  // Unwrapped draw before centring and location.
  double raw(RngStream& rng) const {
    switch (spec_.family) {
      case Family::wrapped_stable: return scale_ * variates::stable(*spec_.alpha, beta(), rng);
      case Family::wrapped_t: return scale_ * variates::student_t(*spec_.alpha, rng);
      case Family::wrapped_skew_normal: return scale_ * variates::skew_normal(*spec_.lambda, rng);
      case Family::wrapped_skew_t: return scale_ * variates::skew_t(*spec_.alpha, *spec_.lambda, rng);
      case Family::von_mises: return variates::von_mises(scale_, rng);
      case Family::sine_skewed: {
        const double lambda = *spec_.lambda;
        const double envelope = 1.0 + std::abs(lambda);
        while (true) {
          const double theta = variates::von_mises(scale_, rng);
          if (rng.uniform() * envelope < 1.0 + lambda * std::sin(theta)) return theta;
        }
      }
      case Family::mixture: {
        const bool first = rng.uniform() < spec_.mixture->p;
        const double x = base_->draw(rng);
        return first ? x : x + spec_.mixture->mu0.radians();
      }
    }
    return 0.0;
  }

  double beta() const noexcept { return spec_.beta.value_or(0.0); }

  // Mean resultant length and mean direction of (s * Y) mod 2pi over a
  // fixed set of draws of Y (common random numbers across s).
  static TrigMoment empirical_moment(std::span<const double> ys, double s) {
    double c = 0.0, sn = 0.0;
    for (double y : ys) {
      c += std::cos(s * y);
      sn += std::sin(s * y);
    }
    const double n = static_cast<double>(ys.size());
    return {std::hypot(c, sn) / n, std::atan2(sn, c)};
  }

  template <class Draw>
  static std::vector<double> calibration_sample(Draw&& draw) {
    RngStream rng(0x5EEDCA1Bu, 0);
    std::vector<double> ys(calibration_draws);
    for (double& y : ys) y = draw(rng);
    return ys;
  }

  void prepare() {
    const Family f = spec_.family;
    switch (f) {
      case Family::wrapped_stable: {
        scale_ = spec_.sigma ? *spec_.sigma : solve_stable_scale(*spec_.alpha, *spec_.kappa);
        if (beta() != 0.0) {
          const double alpha = *spec_.alpha, b = beta();
          auto ys = calibration_sample([&](RngStream& r) { return variates::stable(alpha, b, r); });
          centre_ = empirical_moment(ys, scale_).direction;
        }
        return;
      }
      case Family::wrapped_t:
        scale_ = spec_.sigma ? *spec_.sigma : solve_student_scale(*spec_.alpha, *spec_.kappa);
        return;
      case Family::wrapped_skew_normal:
        scale_ = spec_.sigma ? *spec_.sigma : solve_skew_normal_scale(*spec_.lambda, *spec_.kappa);
        centre_ = skew_normal_wrapped_mean(*spec_.lambda, scale_);
        return;
      case Family::wrapped_skew_t: {
        const double df = *spec_.alpha, lambda = *spec_.lambda;
        auto ys = calibration_sample([&](RngStream& r) { return variates::skew_t(df, lambda, r); });
        if (spec_.sigma) {
          scale_ = *spec_.sigma;
        } else {
          const double target = a_ratio(*spec_.kappa);
          auto g = [&](double s) { return empirical_moment(ys, s).length - target; };
          const double hi = detail::expand_upper(g, 2.0, 1e3, "wrapped_skew_t scale");
          scale_ = bisect(g, 0.0, hi, 1e-10);
        }
        centre_ = empirical_moment(ys, scale_).direction;
        return;
      }
      case Family::von_mises:
        scale_ = *spec_.kappa;
        return;
      case Family::sine_skewed:
        scale_ = solve_sine_skewed_base(*spec_.lambda, *spec_.kappa);
        centre_ = sine_skewed_moment(*spec_.lambda, scale_).direction;
        return;
      case Family::mixture:
        base_ = std::make_shared<const Sampler>(spec_.mixture->base);
        return;
    }
  }

  DistributionSpec spec_;
  double scale_ = 1.0;
  double centre_ = 0.0;
  std::shared_ptr<const Sampler> base_;
};

inline std::vector<Angle> sample(const DistributionSpec& spec, std::size_t n, RngStream& rng) {
  return Sampler(spec).sample(n, rng);
}

}  // namespace circusum
