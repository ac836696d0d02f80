#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "circusum/calibration.hpp"

using namespace circusum;

TEST(NormalCusumArl, TinyLimitGivesImmediateAlarm) {
  // With zeta = 0 the first summand crosses any h -> 0 unless it is exactly 0.
  const auto est = normal_cusum_arl(0.0, 1e-9, 2000, RngStream(1, 0));
  EXPECT_NEAR(est.mean, 1.0, 1e-12);
}

TEST(NormalCusumArl, SmallLimitWithReferenceValue) {
  // A positive zeta needs |Z| > zeta + h; the run length is geometric with
  // success probability 2 P(Z > zeta).
  const double zeta = 0.25;
  const double p = std::erfc(zeta / std::sqrt(2.0));
  const auto est = normal_cusum_arl(zeta, 1e-9, 20'000, RngStream(2, 0));
  EXPECT_NEAR(est.mean, 1.0 / p, 4 * est.std_error);
}

TEST(NormalCusumArl, MonotoneInLimit) {
  const RngStream rng(3, 0);
  double prev = 0.0;
  for (double h : {0.5, 1.0, 2.0, 3.0, 4.0, 5.0}) {
    const auto est = normal_cusum_arl(0.25, h, 2000, rng);
    EXPECT_GT(est.mean, prev) << h;
    prev = est.mean;
  }
}

TEST(NormalCusumArl, MonotoneInReferenceValue) {
  const RngStream rng(4, 0);
  double prev = 0.0;
  for (double zeta : {0.0, 0.1, 0.25, 0.5}) {
    const auto est = normal_cusum_arl(zeta, 4.0, 2000, rng);
    EXPECT_GT(est.mean, prev) << zeta;
    prev = est.mean;
  }
}

TEST(NormalCusumArl, PublishedLimitFiveHundred) {
  const auto est = normal_cusum_arl(0.25, 8.59, 100'000, RngStream(5, 0));
  EXPECT_NEAR(est.mean, 500.0, 15.0);
  EXPECT_EQ(est.censored, 0u);
}

TEST(NormalCusumArl, DeterministicAndThreadIndependent) {
  const auto a = normal_cusum_arl(0.25, 5.0, 3000, RngStream(6, 0), {100'000, 1});
  const auto b = normal_cusum_arl(0.25, 5.0, 3000, RngStream(6, 0), {100'000, 3});
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(NormalCusumArl, HorizonCensoringIsFlagged) {
  const auto est = normal_cusum_arl(0.5, 20.0, 1000, RngStream(7, 0), {50, 1});
  EXPECT_EQ(est.censored, 1000u);
  EXPECT_TRUE(est.flagged);
}

TEST(NormalCusumArl, RejectsBadArguments) {
  EXPECT_THROW(normal_cusum_arl(0.0, -1.0, 2000, RngStream(1, 0)), invalid_input);
  EXPECT_THROW(normal_cusum_arl(0.0, 1.0, 10, RngStream(1, 0)), invalid_input);
}

TEST(FindControlLimit, PublishedLimits) {
  EXPECT_NEAR(find_control_limit(0.25, 500, 100'000, RngStream(42, 0)), 8.59, 0.15);
  EXPECT_NEAR(find_control_limit(0.0, 500, 20'000, RngStream(42, 0)), 30.46, 0.5);
}

TEST(FindControlLimit, RecordMethodMatchesDirectSimulation) {
  // On common random numbers the two must agree exactly at the returned h.
  const RngStream rng(11, 0);
  const auto cal = calibrate_control_limit(0.5, 200, 5000, rng);
  const auto direct = normal_cusum_arl(0.5, cal.h, 5000, rng, {20'000, 0});
  EXPECT_DOUBLE_EQ(direct.mean, cal.estimate.mean);
  EXPECT_NEAR(cal.estimate.mean, 200, 2.0);
}

TEST(FindControlLimit, RoundTripOnFreshNumbers) {
  const double h = find_control_limit(0.25, 300, 100'000, RngStream(12, 0));
  const auto est = normal_cusum_arl(0.25, h, 20'000, RngStream(13, 0));
  EXPECT_NEAR(est.mean, 300, 2 * est.std_error);
}

TEST(FindControlLimit, RejectsBadTargets) {
  EXPECT_THROW(find_control_limit(0.25, 10, 2000, RngStream(1, 0)), invalid_input);
  EXPECT_THROW(find_control_limit(-0.25, 500, 2000, RngStream(1, 0)), invalid_input);
}

TEST(SummarizeRunLengths, MeanAndStandardError) {
  const std::vector<std::uint64_t> xs = {1, 2, 3, 4, 5};
  const auto est = summarize_run_lengths(xs);
  EXPECT_DOUBLE_EQ(est.mean, 3.0);
  EXPECT_NEAR(est.std_error, std::sqrt(2.5 / 5.0), 1e-15);
  EXPECT_FALSE(est.flagged);
}
