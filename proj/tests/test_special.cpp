#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "circusum/angle.hpp"
#include "circusum/bessel.hpp"
#include "circusum/quadrature.hpp"
#include "circusum/roots.hpp"
#include "circusum/scale.hpp"

#ifdef CIRCUSUM_HAVE_BOOST
#include <boost/math/special_functions/bessel.hpp>
#endif

using namespace circusum;


namespace {

// Brute-force power series for I_nu, summed in long double until the terms vanish.
double series_oracle(int nu, double x) {
  long double term = 1.0L;
  for (int k = 1; k <= nu; ++k) term *= static_cast<long double>(x) / (2.0L * k);
  long double sum = 0.0L;
  const long double q = static_cast<long double>(x) * x / 4.0L;
  for (int k = 0; k < 500; ++k) {
    sum += term;
    term *= q / ((k + 1.0L) * (k + 1.0L + nu));
    if (term < sum * 1e-21L) break;
  }
  return static_cast<double>(sum);
}

// K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt, truncated where the integrand is negligible.
double k_integral_oracle(double nu, double x) {
  return integrate([&](double t) { return std::exp(-x * std::cosh(t)) * std::cosh(nu * t); }, 0.0, 12.0, 1e-14);
}

}  // namespace

TEST(BesselI, ValuesAtZero) {
  EXPECT_DOUBLE_EQ(bessel_i0(0.0), 1.0);
  EXPECT_DOUBLE_EQ(bessel_i1(0.0), 0.0);
  EXPECT_THROW(bessel_i0(-1.0), invalid_input);
  EXPECT_THROW(bessel_i1(-0.5), invalid_input);
}

TEST(BesselI, MatchesSeriesOracle) {
  for (double x : {1e-3, 0.1, 1.0, 2.5, 7.0, 14.9, 15.1, 20.0, 30.0, 45.0}) {
    EXPECT_NEAR(bessel_i0(x) / series_oracle(0, x), 1.0, 1e-12) << x;
    EXPECT_NEAR(bessel_i1(x) / series_oracle(1, x), 1.0, 1e-12) << x;
  }
}

TEST(BesselI, ScaledFormsAvoidOverflow) {
  const double a = a_ratio(1000.0);
  EXPECT_TRUE(std::isfinite(a));
  EXPECT_NEAR(a, 1.0 - 1.0 / 2000.0, 1e-6);
  EXPECT_TRUE(std::isfinite(bessel_i0_scaled(5000.0)));
}

#ifdef CIRCUSUM_HAVE_BOOST
TEST(BesselI, MatchesBoost) {
  for (double x = 0.05; x < 60.0; x *= 1.17) {
    EXPECT_NEAR(bessel_i0(x) / boost::math::cyl_bessel_i(0, x), 1.0, 1e-12) << x;
    EXPECT_NEAR(bessel_i1(x) / boost::math::cyl_bessel_i(1, x), 1.0, 1e-12) << x;
  }
}

TEST(BesselK, MatchesBoost) {
  for (double nu : {0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.7, 5.0})
    for (double x : {0.05, 0.3, 1.0, 2.0, 7.5, 25.0})
      EXPECT_NEAR(bessel_k(nu, x) / boost::math::cyl_bessel_k(nu, x), 1.0, 1e-9) << nu << " " << x;
}
#endif

TEST(ARatio, EndpointsAndMonotone) {
  EXPECT_DOUBLE_EQ(a_ratio(0.0), 0.0);
  EXPECT_DOUBLE_EQ(a_inverse(0.0), 0.0);
  double prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double a = a_ratio(50.0 * i / 1000.0);
    EXPECT_GT(a, prev);
    EXPECT_LT(a, 1.0);
    prev = a;
  }
  EXPECT_GT(a_ratio(1e4), 0.9999);
}

TEST(ARatio, InverseRoundTrip) {
  EXPECT_NEAR(a_inverse(a_ratio(2.0)), 2.0, 1e-8);
  for (double k = 0.0; k <= 50.0; k += 0.37) EXPECT_NEAR(a_inverse(a_ratio(k)), k, 1e-8) << k;
  EXPECT_THROW(a_inverse(1.0), invalid_input);
  EXPECT_THROW(a_inverse(-0.1), invalid_input);
}

TEST(BesselK, HalfIntegerClosedForms) {
  EXPECT_NEAR(bessel_k(0.5, 1.0), std::sqrt(pi / 2) * std::exp(-1.0), 1e-15);
  EXPECT_NEAR(bessel_k(1.5, 2.0), std::sqrt(pi / 4) * std::exp(-2.0) * 1.5, 1e-15);
  // K_{5/2}(x) = sqrt(pi/2x) e^-x (1 + 3/x + 3/x^2)
  EXPECT_NEAR(bessel_k(2.5, 3.0) / (std::sqrt(pi / 6) * std::exp(-3.0) * (1 + 1.0 + 1.0 / 3)), 1.0, 1e-13);
}

TEST(BesselK, MatchesIntegralOracle) {
  EXPECT_NEAR(bessel_k(1.0, 1.0) / k_integral_oracle(1.0, 1.0), 1.0, 1e-10);
  for (double nu : {0.2, 1.0, 2.0, 3.3})
    for (double x : {0.5, 1.0, 4.0}) EXPECT_NEAR(bessel_k(nu, x) / k_integral_oracle(nu, x), 1.0, 1e-9) << nu << " " << x;
  EXPECT_THROW(bessel_k(1.0, 0.0), invalid_input);
}

TEST(Quadrature, PolynomialAndGaussian) {
  EXPECT_NEAR(integrate([](double x) { return x * x * x; }, 0.0, 2.0), 4.0, 1e-13);
  EXPECT_NEAR(integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0), std::sqrt(pi), 1e-12);
}

TEST(Bisect, FindsRootAndRejectsNonBracket) {
  EXPECT_NEAR(bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0), std::numbers::sqrt2, 1e-12);
  EXPECT_THROW(bisect([](double x) { return x * x + 1.0; }, 0.0, 2.0), numeric_failure);
}

namespace {
struct ScaleCell {
  const char* family;
  double kappa;
  double expected;
};
}  // namespace

TEST(ScaleSolvers, ScaleTable) {
  const ScaleCell cells[] = {
      {"S2", 1, 0.90},   {"S2", 2, 0.60},   {"S2", 3, 0.46},  {"S1", 1, 0.81}, {"S1", 2, 0.36},
      {"S1", 3, 0.21},   {"S1/2", 1, 0.65}, {"S1/2", 2, 0.13}, {"S1/2", 3, 0.04}, {"t3", 1, 1.07},
      {"t3", 2, 0.64},   {"t3", 3, 0.46},   {"t2", 1, 1.00},  {"t2", 2, 0.55}, {"t2", 3, 0.38},
  };
  for (const auto& c : cells) {
    const std::string f = c.family;
    double sigma = 0;
    if (f == "S2") sigma = solve_stable_scale(2.0, c.kappa);
    else if (f == "S1") sigma = solve_stable_scale(1.0, c.kappa);
    else if (f == "S1/2") sigma = solve_stable_scale(0.5, c.kappa);
    else if (f == "t3") sigma = solve_student_scale(3.0, c.kappa);
    else sigma = solve_student_scale(2.0, c.kappa);
    EXPECT_NEAR(sigma, c.expected, 0.01) << f << " kappa=" << c.kappa;
  }
  EXPECT_NEAR(solve_stable_scale(2.0, 1.0), 0.90, 0.005);
  EXPECT_NEAR(solve_stable_scale(1.0, 2.0), 0.36, 0.005);
  EXPECT_NEAR(solve_stable_scale(0.5, 3.0), 0.04, 0.005);
}

TEST(ScaleSolvers, StudentResidual) {
  for (double df : {1.0, 2.0, 3.0, 5.0, 7.5})
    for (double kappa : {0.5, 1.0, 2.0, 3.0, 8.0}) {
      const double s = solve_student_scale(df, kappa);
      const double z = std::sqrt(df) * s;
      const double lhs = bessel_k(df / 2, z) * std::pow(z, df / 2);
      const double rhs = std::pow(2.0, df / 2 - 1) * std::tgamma(df / 2) * a_ratio(kappa);
      EXPECT_NEAR(lhs / rhs, 1.0, 1e-10) << df << " " << kappa;
    }
}

TEST(ScaleSolvers, CauchyIsStudentOne) {
  // t_1 is the Cauchy law, so both solvers must agree.
  for (double kappa : {1.0, 2.0, 3.0}) EXPECT_NEAR(solve_student_scale(1.0, kappa), solve_stable_scale(1.0, kappa), 1e-9);
}

TEST(ScaleSolvers, RejectsBadKappa) {
  EXPECT_THROW(solve_stable_scale(1.0, 0.0), invalid_input);
  EXPECT_THROW(solve_student_scale(3.0, -1.0), invalid_input);
}

TEST(ScaleSolvers, SkewNormalModulus) {
  for (double lambda : {0.0, 2.0, 7.0, std::numeric_limits<double>::infinity()}) {
    const double s = solve_skew_normal_scale(lambda, 2.0);
    EXPECT_NEAR(std::abs(skew_normal_cf(lambda, s)), a_ratio(2.0), 1e-10) << lambda;
  }
  // lambda = 0 is the normal law
  EXPECT_NEAR(solve_skew_normal_scale(0.0, 2.0), solve_stable_scale(2.0, 2.0) * std::sqrt(2.0), 1e-9);
}

TEST(ScaleSolvers, SineSkewedMoment) {
  for (double lambda : {-1.0, -0.5, 0.3, 1.0}) {
    const double base = solve_sine_skewed_base(lambda, 2.0);
    const TrigMoment m = sine_skewed_moment(lambda, base);
    EXPECT_NEAR(m.length, a_ratio(2.0), 1e-10);
    const double num_c = integrate([&](double t) { return std::exp(base * std::cos(t)) * (1 + lambda * std::sin(t)) * std::cos(t); }, -pi, pi);
    const double num_s = integrate([&](double t) { return std::exp(base * std::cos(t)) * (1 + lambda * std::sin(t)) * std::sin(t); }, -pi, pi);
    const double norm = 2 * pi * bessel_i0(base);
    EXPECT_NEAR(std::hypot(num_c, num_s) / norm, m.length, 1e-10);
    EXPECT_NEAR(std::atan2(num_s, num_c), m.direction, 1e-10);
  }
}
