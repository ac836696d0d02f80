#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "angle.hpp"
#include "errors.hpp"

namespace circusum {

enum class Family { wrapped_stable, wrapped_t, wrapped_skew_normal, wrapped_skew_t, von_mises, sine_skewed, mixture };

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::wrapped_stable: return "wrapped_stable";
    case Family::wrapped_t: return "wrapped_t";
    case Family::wrapped_skew_normal: return "wrapped_skew_normal";
    case Family::wrapped_skew_t: return "wrapped_skew_t";
    case Family::von_mises: return "von_mises";
    case Family::sine_skewed: return "sine_skewed";
    case Family::mixture: return "mixture";
  }
  return "unknown";
}

inline Family family_from_string(std::string_view s) {
  for (Family f : {Family::wrapped_stable, Family::wrapped_t, Family::wrapped_skew_normal, Family::wrapped_skew_t,
                   Family::von_mises, Family::sine_skewed, Family::mixture})
    if (to_string(f) == s) return f;
  throw invalid_input("unknown distribution family '" + std::string(s) + "'");
}

struct MixtureSpec;

/// A data-generating process on the circle.
///
/// Wrapped families draw Y on the line and wrap sigma*Y + nu. `alpha` is the
/// stable index for wrapped_stable and the degrees of freedom for the t
/// families; `lambda` is the skewness of the skew families (infinity allowed
/// for the half-distribution limit) or the sine-skewing weight in [-1, 1].
/// Give either `sigma` or a target `kappa`; the scale is then solved so that
/// E[cos(X - nu)] = A(kappa).
///
/// A mixture is p*g(theta) + (1-p)*g(theta - mu0) with g the base spec.
struct DistributionSpec {
  Family family = Family::von_mises;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> lambda;
  std::optional<double> sigma;
  std::optional<double> kappa;
  Angle nu;
  std::shared_ptr<const MixtureSpec> mixture;

  static DistributionSpec wrapped_stable(double alpha, double kappa, double beta = 0.0);
  static DistributionSpec wrapped_t(double df, double kappa);
  static DistributionSpec wrapped_skew_normal(double lambda, double kappa);
  static DistributionSpec wrapped_skew_t(double df, double lambda, double kappa);
  static DistributionSpec von_mises(double kappa);
  static DistributionSpec sine_skewed(double lambda, double kappa);
  static DistributionSpec make_mixture(double p, Angle mu0, DistributionSpec base);

  DistributionSpec located_at(Angle location) const {
    DistributionSpec copy = *this;
    copy.nu = location;
    return copy;
  }

  /// Human-readable tag, e.g. "wrapped_t(3)".
  std::string label() const;
};

struct MixtureSpec {
  double p = 1.0;
  Angle mu0;
  DistributionSpec base;
};

inline DistributionSpec DistributionSpec::wrapped_stable(double alpha, double kappa, double beta) {
  DistributionSpec d;
  d.family = Family::wrapped_stable;
  d.alpha = alpha;
  d.beta = beta;
  d.kappa = kappa;
  return d;
}
inline DistributionSpec DistributionSpec::wrapped_t(double df, double kappa) {
  DistributionSpec d;
  d.family = Family::wrapped_t;
  d.alpha = df;
  d.kappa = kappa;
  return d;
}
inline DistributionSpec DistributionSpec::wrapped_skew_normal(double lambda, double kappa) {
  DistributionSpec d;
  d.family = Family::wrapped_skew_normal;
  d.lambda = lambda;
  d.kappa = kappa;
  return d;
}
inline DistributionSpec DistributionSpec::wrapped_skew_t(double df, double lambda, double kappa) {
  DistributionSpec d;
  d.family = Family::wrapped_skew_t;
  d.alpha = df;
  d.lambda = lambda;
  d.kappa = kappa;
  return d;
}
inline DistributionSpec DistributionSpec::von_mises(double kappa) {
  DistributionSpec d;
  d.family = Family::von_mises;
  d.kappa = kappa;
  return d;
}
inline DistributionSpec DistributionSpec::sine_skewed(double lambda, double kappa) {
  DistributionSpec d;
  d.family = Family::sine_skewed;
  d.lambda = lambda;
  d.kappa = kappa;
  return d;
}
inline DistributionSpec DistributionSpec::make_mixture(double p, Angle mu0, DistributionSpec base) {
  DistributionSpec d;
  d.family = Family::mixture;
  d.mixture = std::make_shared<const MixtureSpec>(MixtureSpec{p, mu0, std::move(base)});
  return d;
}

inline std::string DistributionSpec::label() const {
  auto num = [](double v) {
    if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  };
  std::string out(to_string(family));
  switch (family) {
    case Family::wrapped_stable:
      out += "(" + num(*alpha);
      if (beta && *beta != 0.0) out += ",beta=" + num(*beta);
      return out + ")";
    case Family::wrapped_t: return out + "(" + num(*alpha) + ")";
    case Family::wrapped_skew_normal: return out + "(" + num(*lambda) + ")";
    case Family::wrapped_skew_t: return out + "(" + num(*alpha) + "," + num(*lambda) + ")";
    case Family::sine_skewed: return out + "(" + num(*lambda) + ")";
    case Family::von_mises: return out;
    case Family::mixture: return out + "(" + num(mixture->p) + "," + mixture->base.label() + ")";
  }
  return out;
}

namespace detail {
inline void reject_field(const std::optional<double>& v, const char* field, Family f) {
  if (v) throw invalid_input(std::string("field '") + field + "' is not used by family " + std::string(to_string(f)));
}
inline double need_field(const std::optional<double>& v, const char* field, Family f) {
  if (!v) throw invalid_input(std::string("family ") + std::string(to_string(f)) + " requires field '" + field + "'");
  if (std::isnan(*v)) throw invalid_input(std::string("field '") + field + "' is NaN");
  return *v;
}
inline void need_scale(const DistributionSpec& d) {
  if (d.sigma.has_value() == d.kappa.has_value())
    throw invalid_input("family " + std::string(to_string(d.family)) + " takes exactly one of 'sigma' or 'kappa'");
  if (d.sigma && !(*d.sigma > 0.0 && std::isfinite(*d.sigma))) throw invalid_input("sigma must be finite and > 0");
  if (d.kappa && !(*d.kappa > 0.0 && std::isfinite(*d.kappa))) throw invalid_input("kappa must be finite and > 0");
}
}  // namespace detail

/// Throws invalid_input unless exactly the parameters relevant to the family
/// are present and in range.
inline void validate(const DistributionSpec& d) {
  using detail::need_field;
  using detail::reject_field;
  const Family f = d.family;
  if (f != Family::mixture && d.mixture) throw invalid_input("field 'mixture' is only valid for family mixture");
  switch (f) {
    case Family::wrapped_stable: {
      const double a = need_field(d.alpha, "alpha", f);
      if (!(a > 0.0 && a <= 2.0)) throw invalid_input("stable index alpha must lie in (0, 2]");
      if (d.beta && !(*d.beta >= -1.0 && *d.beta <= 1.0)) throw invalid_input("stable skewness beta must lie in [-1, 1]");
      if (a == 2.0 && d.beta && *d.beta != 0.0) throw invalid_input("beta has no effect at alpha = 2; leave it 0");
      reject_field(d.lambda, "lambda", f);
      detail::need_scale(d);
      return;
    }
    case Family::wrapped_t:
      if (!(need_field(d.alpha, "alpha", f) > 0.0)) throw invalid_input("degrees of freedom must be > 0");
      reject_field(d.beta, "beta", f);
      reject_field(d.lambda, "lambda", f);
      detail::need_scale(d);
      return;
    case Family::wrapped_skew_normal:
      need_field(d.lambda, "lambda", f);
      reject_field(d.alpha, "alpha", f);
      reject_field(d.beta, "beta", f);
      detail::need_scale(d);
      return;
    case Family::wrapped_skew_t:
      if (!(need_field(d.alpha, "alpha", f) > 0.0)) throw invalid_input("degrees of freedom must be > 0");
      need_field(d.lambda, "lambda", f);
      reject_field(d.beta, "beta", f);
      detail::need_scale(d);
      return;
    case Family::von_mises: {
      const double k = need_field(d.kappa, "kappa", f);
      if (!(k >= 0.0 && std::isfinite(k))) throw invalid_input("von Mises kappa must be finite and >= 0");
      reject_field(d.alpha, "alpha", f);
      reject_field(d.beta, "beta", f);
      reject_field(d.lambda, "lambda", f);
      reject_field(d.sigma, "sigma", f);
      return;
    }
    case Family::sine_skewed: {
      const double l = need_field(d.lambda, "lambda", f);
      if (!(l >= -1.0 && l <= 1.0)) throw invalid_input("sine-skewing lambda must lie in [-1, 1]");
      const double k = need_field(d.kappa, "kappa", f);
      if (!(k > 0.0 && std::isfinite(k))) throw invalid_input("kappa must be finite and > 0");
      reject_field(d.alpha, "alpha", f);
      reject_field(d.beta, "beta", f);
      reject_field(d.sigma, "sigma", f);
      return;
    }
    case Family::mixture:
      if (!d.mixture) throw invalid_input("family mixture requires field 'mixture'");
      reject_field(d.alpha, "alpha", f);
      reject_field(d.beta, "beta", f);
      reject_field(d.lambda, "lambda", f);
      reject_field(d.sigma, "sigma", f);
      reject_field(d.kappa, "kappa", f);
      if (!(d.mixture->p >= 0.5 && d.mixture->p < 1.0)) throw invalid_input("mixture weight p must lie in [1/2, 1)");
      if (d.mixture->base.family == Family::mixture) throw invalid_input("nested mixtures are not supported");
      validate(d.mixture->base);
      return;
  }
}

}  // namespace circusum
