#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "circusum/angle.hpp"

using namespace circusum;

TEST(Normalize, IdentityFullTurnAndBoundary) {
  EXPECT_DOUBLE_EQ(normalize_angle(0.0).radians(), 0.0);
  EXPECT_NEAR(normalize_angle(two_pi).radians(), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(normalize_angle(pi).radians(), -pi);
  EXPECT_DOUBLE_EQ(normalize_angle(-pi).radians(), -pi);
}

TEST(Normalize, RangeOverManyTurns) {
  for (double x = -50.0; x <= 50.0; x += 0.0137) {
    const double r = normalize_angle(x).radians();
    EXPECT_GE(r, -pi);
    EXPECT_LT(r, pi);
    EXPECT_NEAR(std::sin(r), std::sin(x), 1e-12);
    EXPECT_NEAR(std::cos(r), std::cos(x), 1e-12);
  }
}

TEST(Normalize, RejectsNonFinite) {
  EXPECT_THROW(normalize_angle(std::numeric_limits<double>::infinity()), invalid_input);
  EXPECT_THROW(normalize_angle(std::numeric_limits<double>::quiet_NaN()), invalid_input);
}

TEST(Normalize, Degrees) {
  EXPECT_DOUBLE_EQ(Angle::from_degrees(180.0).radians(), -pi);
  EXPECT_NEAR(Angle::from_degrees(90.0).radians(), pi / 2, 1e-15);
  EXPECT_NEAR(Angle::from_degrees(-90.0).degrees_positive(), 270.0, 1e-12);
}

TEST(Normalize, RotateAndReflect) {
  const Angle a = Angle::from_radians(3.0);
  EXPECT_NEAR(a.rotated(1.0).radians(), 4.0 - two_pi, 1e-14);
  EXPECT_NEAR(a.reflected().radians(), -3.0, 1e-15);
}

TEST(FourQuadrantAtan, DefinitionBranches) {
  EXPECT_DOUBLE_EQ(four_quadrant_atan(0.0, 1.0).radians(), 0.0);
  EXPECT_DOUBLE_EQ(four_quadrant_atan(1.0, 0.0).radians(), pi / 2);
  EXPECT_DOUBLE_EQ(four_quadrant_atan(-1.0, 0.0).radians(), -pi / 2);
  EXPECT_DOUBLE_EQ(four_quadrant_atan(0.0, 0.0).radians(), 0.0);
  // s = 0, c < 0 lands on the boundary, which normalizes to -pi
  EXPECT_DOUBLE_EQ(four_quadrant_atan(0.0, -1.0).radians(), -pi);
}

TEST(FourQuadrantAtan, AgreesWithStdAtan2OffTheAxes) {
  for (double t = -3.1; t < 3.1; t += 0.05) {
    const double s = 2.5 * std::sin(t), c = 2.5 * std::cos(t);
    EXPECT_NEAR(four_quadrant_atan(s, c).radians(), std::atan2(s, c), 1e-14) << t;
  }
}
