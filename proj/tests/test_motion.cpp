#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "disip/motion.hpp"

using namespace disip;

TEST(Interpolate, Endpoints) {
  const Pose a(1, 2, 3, 0.3), b(-4, 5, 6, -2.0);
  EXPECT_EQ(interpolate(a, b, 0.0), a);
  EXPECT_EQ(interpolate(a, b, 1.0), b);
}

TEST(Interpolate, Midpoint) {
  const Pose m = interpolate(Pose(0, 0, 0, 0), Pose(2, 0, 0, kPi / 2), 0.5);
  EXPECT_NEAR(m.x, 1.0, 1e-15);
  EXPECT_NEAR(m.y, 0.0, 1e-15);
  EXPECT_NEAR(m.z, 0.0, 1e-15);
  EXPECT_NEAR(m.psi, kPi / 4, 1e-15);
}

TEST(Interpolate, YawTakesShortArcAcrossSeam) {
  const Pose m = interpolate(Pose(0, 0, 0, kPi - 0.1), Pose(0, 0, 0, -kPi + 0.1), 0.5);
  EXPECT_NEAR(std::abs(m.psi), kPi, 1e-12);
}

TEST(Interpolate, RejectsFractionOutsideUnitInterval) {
  EXPECT_THROW(interpolate(Pose(), Pose(), -0.01), std::invalid_argument);
  EXPECT_THROW(interpolate(Pose(), Pose(), 1.01), std::invalid_argument);
}

TEST(TravelTime, Examples) {
  EXPECT_EQ(travel_time(Pose(1, 1, 1, 1), Pose(1, 1, 1, 1), 3.0, 0.5), 0.0);
  EXPECT_NEAR(travel_time(Pose(0, 0, 0, 0), Pose(3, 0, 0, 0), 3.0, 0.5), 1.0, 1e-15);
  EXPECT_NEAR(travel_time(Pose(0, 0, 0, 0), Pose(0.1, 0, 0, kPi), 3.0, 0.5), 6.283185307179586,
              1e-12);
}

TEST(TravelTime, RejectsNonPositiveLimits) {
  EXPECT_THROW(travel_time(Pose(), Pose(), 0.0, 0.5), std::invalid_argument);
  EXPECT_THROW(travel_time(Pose(), Pose(), 1.0, -1.0), std::invalid_argument);
}

class TravelTimeProperties : public ::testing::Test {
 protected:
  Pose random_pose() { return Pose(c(gen), c(gen), c(gen), a(gen)); }
  std::mt19937_64 gen{11};
  std::uniform_real_distribution<double> c{-50, 50};
  std::uniform_real_distribution<double> a{-10, 10};
  std::uniform_real_distribution<double> v{0.1, 10};
};

TEST_F(TravelTimeProperties, Symmetric) {
  for (int i = 0; i < 5000; ++i) {
    const Pose p = random_pose(), q = random_pose();
    const double s = v(gen), w = v(gen);
    ASSERT_EQ(travel_time(p, q, s, w), travel_time(q, p, s, w));
  }
}

TEST_F(TravelTimeProperties, BoundedBelowByEachTermWithOneTight) {
  for (int i = 0; i < 5000; ++i) {
    const Pose p = random_pose(), q = random_pose();
    const double s = v(gen), w = v(gen);
    const double t = travel_time(p, q, s, w);
    const double lin = distance(p, q) / s;
    const double ang = angular_distance(p.psi, q.psi) / w;
    ASSERT_GE(t, lin);
    ASSERT_GE(t, ang);
    ASSERT_TRUE(t == lin || t == ang);
  }
}

TEST_F(TravelTimeProperties, FasterNeverSlower) {
  for (int i = 0; i < 5000; ++i) {
    const Pose p = random_pose(), q = random_pose();
    const double s = v(gen), w = v(gen);
    ASSERT_LE(travel_time(p, q, s * 1.5, w), travel_time(p, q, s, w));
  }
}

TEST(MakeSegment, RecordsLimitingSpeed) {
  const TimedSegment seg = make_segment(Pose(0, 0, 0, 0), Pose(6, 0, 0, 0), 3.0, 0.5);
  EXPECT_NEAR(seg.duration, 2.0, 1e-15);
  EXPECT_EQ(seg.speed_limit_used, 3.0);
}
