#include <gtest/gtest.h>

#include <cmath>
#include <optional>
#include <vector>

#include "circusum/detector.hpp"
#include "circusum/sampler.hpp"

using namespace circusum;

namespace {

TrigAccumulator of(std::initializer_list<double> xs) {
  TrigAccumulator a;
  for (double x : xs) a.push(x);
  return a;
}

std::vector<Angle> stream(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
  RngStream rng(seed, 0);
  return Sampler(spec).sample(n, rng);
}

// Summand sequence over a stream, starting once `warm` observations have been seen.
std::vector<double> summands(Mode mode, const std::vector<Angle>& xs, std::size_t warm = 3) {
  TrigAccumulator acc;
  std::vector<double> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i >= warm) out.push_back(*summand(mode, acc, xs[i]));
    acc.push(xs[i]);
  }
  return out;
}

}  // namespace

TEST(DirectionSummand, HandExamples) {
  const auto acc = of({-pi / 4, pi / 4});
  EXPECT_NEAR(*direction_summand(acc, Angle::from_radians(pi / 2)), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(*direction_summand(acc, Angle::from_radians(0.0)), 0.0, 1e-15);
  EXPECT_THROW(direction_summand(of({0.3}), Angle{}), invalid_input);
}

TEST(ConcentrationSummand, HandExamples) {
  const auto acc = of({-pi / 3, 0.0, pi / 3});
  EXPECT_NEAR(*concentration_summand(acc, Angle::from_radians(0.0)), (1.0 - 2.0 / 3.0) / std::sqrt(1.0 / 18.0), 1e-12);
  EXPECT_NEAR(*concentration_summand(acc, Angle::from_radians(std::acos(2.0 / 3.0))), 0.0, 1e-12);
}

TEST(Summands, DegenerateWarmupIsEmpty) {
  EXPECT_FALSE(direction_summand(of({0.7, 0.7, 0.7}), Angle::from_radians(1.0)).has_value());
  EXPECT_FALSE(concentration_summand(of({0.7, 0.7, 0.7}), Angle::from_radians(1.0)).has_value());
}

TEST(Summands, RotationInvariance) {
  const auto xs = stream(DistributionSpec::wrapped_t(3.0, 1.5), 3000, 1);
  for (double delta : {1.234, -2.9, 3.1}) {
    std::vector<Angle> ys;
    for (Angle x : xs) ys.push_back(x.rotated(delta));
    for (Mode mode : {Mode::direction, Mode::concentration}) {
      const auto a = summands(mode, xs), b = summands(mode, ys);
      ASSERT_EQ(a.size(), b.size());
      for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a[i], b[i], 1e-10) << to_string(mode) << " step " << i;
    }
  }
}

TEST(Summands, Reflection) {
  const auto xs = stream(DistributionSpec::wrapped_stable(1.0, 2.0).located_at(Angle::from_radians(0.6)), 3000, 2);
  std::vector<Angle> ys;
  for (Angle x : xs) ys.push_back(x.reflected());
  const auto d1 = summands(Mode::direction, xs), d2 = summands(Mode::direction, ys);
  const auto c1 = summands(Mode::concentration, xs), c2 = summands(Mode::concentration, ys);
  for (std::size_t i = 0; i < d1.size(); ++i) {
    ASSERT_NEAR(d1[i], -d2[i], 1e-10);
    ASSERT_NEAR(c1[i], c2[i], 1e-10);
  }
}

TEST(Summands, CancelledFormEqualsDefinition) {
  // V_n / B_{n-1} with explicit nu_hat: V = sin(x - nu), B^2 = mean sin^2(X_i - nu)
  const auto xs = stream(DistributionSpec::von_mises(1.0), 10'003, 3);
  TrigAccumulator acc;
  std::vector<double> seen;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i >= 3) {
      const double nu = acc.mean_direction().radians();
      double b2 = 0, c2 = 0;
      for (double y : seen) {
        b2 += std::sin(y - nu) * std::sin(y - nu);
        c2 += std::cos(y - nu) * std::cos(y - nu);
      }
      const double n = static_cast<double>(seen.size());
      const double direct = std::sin(xs[i].radians() - nu) / std::sqrt(b2 / n);
      ASSERT_NEAR(*direction_summand(acc, xs[i]), direct, 1e-10) << i;
      if (i % 50 == 0) {
        const double rbar = acc.resultant_length() / n;
        const double conc = (std::cos(xs[i].radians() - nu) - rbar) / std::sqrt(c2 / n - rbar * rbar);
        ASSERT_NEAR(*concentration_summand(acc, xs[i]), conc, 1e-10) << i;
      }
    }
    acc.push(xs[i]);
    seen.push_back(xs[i].radians());
  }
}

TEST(Summands, InControlMoments) {
  const Sampler s(DistributionSpec::von_mises(2.0));
  RngStream rng(4242, 0);
  for (Mode mode : {Mode::direction, Mode::concentration}) {
    TrigAccumulator acc;
    for (int i = 0; i < 50; ++i) acc.push(s.draw(rng));
    const int steps = 1'000'000;
    long double sum = 0, sum_sq = 0;
    for (int i = 0; i < steps; ++i) {
      const Angle x = Angle::from_radians(s.draw(rng));
      const double xi = *summand(mode, acc, x);
      sum += xi;
      sum_sq += static_cast<long double>(xi) * xi;
      acc.push(x);
    }
    const double mean = static_cast<double>(sum / steps);
    const double var = static_cast<double>(sum_sq / steps) - mean * mean;
    EXPECT_LE(std::abs(mean), 4.0 * std::sqrt(var / steps)) << to_string(mode);
    EXPECT_NEAR(var, 1.0, 0.02) << to_string(mode);
  }
}

TEST(CusumState, ZeroSummandNeverSignals) {
  CusumState st({Mode::direction, 0.25, 8.59, 5});
  for (int i = 0; i < 10'000; ++i) ASSERT_EQ(st.step_summand(0.0), Phase::monitoring);
  EXPECT_EQ(st.d_plus(), 0.0);
  EXPECT_EQ(st.d_minus(), 0.0);
}

TEST(CusumState, ConstantSummandSignalsOnNinthStep) {
  const std::size_t m = 25;
  CusumState st({Mode::direction, 0.25, 8.59, m});
  const auto warm = stream(DistributionSpec::von_mises(2.0), m, 5);
  for (Angle x : warm) ASSERT_EQ(st.step(x), Phase::warming);
  int steps = 0;
  while (st.step_summand(1.25) != Phase::signaled) ++steps;
  EXPECT_EQ(steps + 1, 9);
  EXPECT_EQ(st.signal()->side, Side::up);
  EXPECT_EQ(changepoint_estimate(st), m);
  EXPECT_EQ(st.signal()->signal_index, m + 9);
  EXPECT_THROW(st.step_summand(0.0), invalid_input);
  EXPECT_THROW(st.step(Angle{}), invalid_input);
}

TEST(CusumState, NegativeDriftSignalsDown) {
  CusumState st({Mode::direction, 0.0, 3.0, 2});
  st.step_summand(0.5);
  st.step_summand(-1.0);
  st.step_summand(-1.0);
  EXPECT_EQ(st.step_summand(-1.5), Phase::signaled);
  EXPECT_EQ(st.signal()->side, Side::down);
  // D- sat at zero after the first step (min(0, 0.5) = 0)
  EXPECT_EQ(changepoint_estimate(st), 1u);
}

TEST(CusumState, PhasesAndBarriers) {
  const std::size_t m = 20;
  const CusumConfig cfg{Mode::direction, 0.25, 6.0, m};
  const auto xs = stream(DistributionSpec::wrapped_t(2.0, 1.0), 20'000, 6);
  CusumState st(cfg);
  std::size_t i = 0;
  for (; i < xs.size(); ++i) {
    const Phase p = st.step(xs[i]);
    EXPECT_EQ(p == Phase::warming, st.n_total() <= m);
    EXPECT_GE(st.d_plus(), 0.0);
    EXPECT_LE(st.d_minus(), 0.0);
    if (p == Phase::signaled) break;
    EXPECT_LT(st.d_plus(), cfg.h);
    EXPECT_GT(st.d_minus(), -cfg.h);
  }
  ASSERT_EQ(st.phase(), Phase::signaled);
  const SignalEvent ev = *st.signal();
  EXPECT_LT(ev.changepoint, ev.signal_index);
  EXPECT_GE(ev.changepoint, m);
  const double side_value = ev.side == Side::up ? st.d_plus() : -st.d_minus();
  EXPECT_GE(side_value, cfg.h);
}

TEST(CusumState, SignalingObservationEntersTheSums) {
  CusumState st({Mode::direction, 0.0, 0.1, 2});
  st.step(Angle::from_radians(-0.5));
  st.step(Angle::from_radians(0.5));
  EXPECT_EQ(st.step(Angle::from_radians(1.0)), Phase::signaled);
  EXPECT_EQ(st.accumulator().n, 3u);
}

TEST(CusumState, DegenerateWarmupIsExtended) {
  CusumState st({Mode::direction, 0.25, 8.0, 3});
  for (int i = 0; i < 4; ++i) st.step(Angle::from_radians(0.2));
  EXPECT_EQ(st.phase(), Phase::warming);
  st.step(Angle::from_radians(0.4));
  EXPECT_EQ(st.phase(), Phase::warming);
  st.step(Angle::from_radians(-0.1));
  EXPECT_EQ(st.phase(), Phase::monitoring);
  EXPECT_EQ(st.warmup_length(), 5u);
  EXPECT_EQ(st.warmup_extensions(), 2u);
}

TEST(Restart, RejectsUnsignaledAndOutOfRange) {
  CusumState st({Mode::direction, 0.25, 8.59, 5});
  EXPECT_THROW(restart(st, 3, 100), invalid_input);
  while (st.step_summand(2.0) != Phase::signaled) {
  }
  EXPECT_THROW(restart(st, 101, 100), invalid_input);
  const CusumState fresh = restart(st, 6, 100);
  EXPECT_EQ(fresh.phase(), Phase::warming);
  EXPECT_EQ(fresh.current_index(), 5u);
  EXPECT_EQ(fresh.accumulator().n, 0u);
}

TEST(Restart, NewWarmupStartsAtFromIndex) {
  const std::size_t m = 10;
  CusumState st({Mode::direction, 0.25, 8.0, m}, 40);
  const auto xs = stream(DistributionSpec::von_mises(2.0), m + 1, 8);
  for (std::size_t i = 0; i < m; ++i) st.step(xs[i]);
  EXPECT_EQ(st.phase(), Phase::warming);
  EXPECT_EQ(st.current_index(), 50u);
  st.step(xs[m]);
  EXPECT_EQ(st.phase(), Phase::monitoring);
  EXPECT_EQ(st.current_index(), 51u);
}

TEST(CusumConfig, Validation) {
  EXPECT_THROW(CusumState({Mode::direction, 0.0, 0.0, 5}), invalid_input);
  EXPECT_THROW(CusumState({Mode::direction, -0.1, 1.0, 5}), invalid_input);
  EXPECT_THROW(CusumState({Mode::direction, 0.0, 1.0, 1}), invalid_input);
  EXPECT_EQ(mode_from_string("concentration"), Mode::concentration);
  EXPECT_THROW(mode_from_string("dir"), invalid_input);
}
