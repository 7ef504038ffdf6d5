#include "bendjoint/kinematics.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include "bendjoint/errors.hpp"
#include "oracles.hpp"

using namespace bendjoint;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLen = 40.0;

// Values frozen from the closed form (l/theta)(1 - cos, 0, sin) evaluated
// independently.
constexpr double kQuarterBendReach = 25.464790894703256;  // 40 / (pi/2)
constexpr double kSixtyRadial = 19.09859317102744;
constexpr double kSixtyAxial = 33.07973372530753;

void expect_rotation(const Eigen::Matrix3d& r) {
  EXPECT_LT((r.transpose() * r - Eigen::Matrix3d::Identity()).norm(), 1e-9);
  EXPECT_NEAR(r.determinant(), 1.0, 1e-9);
}

}  // namespace

TEST(FkTip, StraightLimitIsOnAxis) {
  for (double phi : {0.0, 1.0, 4.0}) {
    const Pose p = fk_tip({0.0, phi, kLen});
    EXPECT_DOUBLE_EQ(p.position.x(), 0.0);
    EXPECT_DOUBLE_EQ(p.position.y(), 0.0);
    EXPECT_DOUBLE_EQ(p.position.z(), kLen);
    EXPECT_TRUE(p.orientation.isApprox(Eigen::Matrix3d::Identity(), 1e-15));
  }
}

TEST(FkTip, QuarterBendInBothDirections) {
  const Pose up = fk_tip({kPi / 2, 0.0, kLen});
  EXPECT_NEAR(up.position.x(), kQuarterBendReach, 1e-12);
  EXPECT_NEAR(up.position.y(), 0.0, 1e-12);
  EXPECT_NEAR(up.position.z(), kQuarterBendReach, 1e-12);

  const Pose down = fk_tip({kPi / 2, kPi, kLen});
  EXPECT_NEAR(down.position.x(), -kQuarterBendReach, 1e-12);
  EXPECT_NEAR(down.position.y(), 0.0, 1e-12);
  EXPECT_NEAR(down.position.z(), kQuarterBendReach, 1e-12);
}

TEST(FkTip, TipTangentFollowsBend) {
  const Pose p = fk_tip({kPi / 2, 0.0, kLen});
  expect_rotation(p.orientation);
  // Tip axis points along +x after a quarter bend toward phi = 0.
  EXPECT_TRUE(p.orientation.col(2).isApprox(Eigen::Vector3d::UnitX(), 1e-12));
}

TEST(FkTip, MatchesArcIntegration) {
  for (double theta : {1e-4, 0.3, kPi / 3, kPi / 2, 2.5}) {
    for (double phi : {0.0, 0.7, 3.5}) {
      const Eigen::Vector3d ref = oracle::integrate_arc(theta, phi, kLen, 10000);
      EXPECT_LT((fk_tip({theta, phi, kLen}).position - ref).norm(), 1e-6)
          << "theta=" << theta << " phi=" << phi;
    }
  }
}

TEST(FkTip, NormBoundedByArcLength) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> theta(1e-6, kPi);
  std::uniform_real_distribution<double> phi(0.0, 2 * kPi);
  for (int i = 0; i < 500; ++i) {
    EXPECT_LT(fk_tip({theta(rng), phi(rng), kLen}).position.norm(), kLen);
  }
  EXPECT_DOUBLE_EQ(fk_tip({0.0, 0.0, kLen}).position.norm(), kLen);
}

TEST(FkTip, RotationalSymmetryAboutBaseAxis) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> theta(0.0, kPi / 2);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  for (int i = 0; i < 500; ++i) {
    const double t = theta(rng);
    const double phi = angle(rng);
    const double delta = angle(rng);
    const Eigen::Vector3d rotated =
        Eigen::AngleAxisd(delta, Eigen::Vector3d::UnitZ()) * fk_tip({t, phi, kLen}).position;
    EXPECT_LT((fk_tip({t, phi + delta, kLen}).position - rotated).norm(), 1e-12);
  }
}

TEST(FkTip, ContinuousThroughStraight) {
  for (double phi : {0.0, 2.0}) {
    const Pose a = fk_tip({1e-8, phi, kLen});
    const Pose b = fk_tip({0.0, phi, kLen});
    EXPECT_LT((a.position - b.position).norm(), 1e-6);
    // Either side of the series branch.
    const Pose below = fk_tip({kStraightEpsilon, phi, kLen});
    const Pose above = fk_tip({std::nextafter(kStraightEpsilon, 1.0), phi, kLen});
    EXPECT_LT((below.position - above.position).norm(), 1e-12);
  }
}

TEST(FkTip, RejectsInvalidArcs) {
  EXPECT_THROW(fk_tip({-0.1, 0.0, kLen}), InvalidArc);
  EXPECT_THROW(fk_tip({3.5, 0.0, kLen}), InvalidArc);
  EXPECT_THROW(fk_tip({0.5, 0.0, 0.0}), InvalidArc);
  EXPECT_THROW(fk_tip({0.5, 0.0, -1.0}), InvalidArc);
  EXPECT_THROW(fk_tip({0.5, std::nan(""), kLen}), InvalidArc);
}

TEST(RingPoses, StraightStackSitsOnAxis) {
  const auto poses = fk_ring_poses({0.0, 1.2, kLen}, RingStackConfig{});
  ASSERT_EQ(poses.size(), 8u);
  for (std::size_t k = 0; k < poses.size(); ++k) {
    EXPECT_NEAR(poses[k].position.z(), static_cast<double>(k) * kLen / 7.0, 1e-12);
    EXPECT_NEAR(poses[k].position.head<2>().norm(), 0.0, 1e-15);
    EXPECT_TRUE(poses[k].orientation.isApprox(Eigen::Matrix3d::Identity(), 1e-15));
  }
}

TEST(RingPoses, EqualGapAnglesAndExactTip) {
  const ArcParams arc{kPi / 2, 0.4, kLen};
  const auto poses = fk_ring_poses(arc, RingStackConfig{});
  const auto gaps = ring_gap_angles(poses);
  ASSERT_EQ(gaps.size(), 7u);
  for (double g : gaps) {
    EXPECT_NEAR(g, kPi / 2 / 7, 1e-12);
    EXPECT_NEAR(g * 180.0 / kPi, 12.857142857142858, 1e-10);
  }
  const Pose tip = fk_tip(arc);
  EXPECT_EQ(poses.back().position, tip.position);
  EXPECT_EQ(poses.back().orientation, tip.orientation);
  EXPECT_EQ(poses.front().position, Eigen::Vector3d::Zero());
}

TEST(RingPoses, TwoRingStackCarriesWholeBend) {
  RingStackConfig stack;
  stack.ring_count = 2;
  const auto poses = fk_ring_poses({1.0, 0.0, kLen}, stack);
  ASSERT_EQ(poses.size(), 2u);
  EXPECT_NEAR(ring_gap_angles(poses).at(0), 1.0, 1e-12);
}

TEST(RingPoses, RejectsSingleRing) {
  RingStackConfig stack;
  stack.ring_count = 1;
  EXPECT_THROW(fk_ring_poses({1.0, 0.0, kLen}, stack), InvalidConfig);
}

TEST(IkTip, StraightTarget) {
  const IkSolution s = ik_tip({0, 0, 40}, kLen);
  EXPECT_EQ(s.arc.theta, 0.0);
  EXPECT_EQ(s.arc.phi, 0.0);
  EXPECT_EQ(s.residual, 0.0);
}

TEST(IkTip, InvertsQuarterBend) {
  const IkSolution s = ik_tip({kQuarterBendReach, 0, kQuarterBendReach}, kLen);
  EXPECT_NEAR(s.arc.theta, kPi / 2, 1e-12);
  EXPECT_NEAR(s.arc.phi, 0.0, 1e-12);
  EXPECT_LT(s.residual, 1e-9);
}

TEST(IkTip, InvertsSixtyDegreeBendInYPlane) {
  // Oracle first: the forward map gives the target.
  const Eigen::Vector3d target = fk_tip({kPi / 3, kPi / 2, kLen}).position;
  EXPECT_NEAR(target.y(), kSixtyRadial, 1e-12);
  EXPECT_NEAR(target.z(), kSixtyAxial, 1e-12);
  const IkSolution s = ik_tip(target, kLen);
  EXPECT_NEAR(s.arc.theta, kPi / 3, 1e-12);
  EXPECT_NEAR(s.arc.phi, kPi / 2, 1e-12);
  EXPECT_LT(s.residual, 1e-9);
}

TEST(IkTip, ShortTargetReportsLengthResidual) {
  // Same direction as a 60 degree bend but on a shorter arc (about 37.7 mm).
  const IkSolution s = ik_tip({0, 18.006, 31.192}, kLen);
  EXPECT_NEAR(s.arc.theta, kPi / 3, 2e-4);
  EXPECT_NEAR(s.arc.phi, kPi / 2, 1e-12);
  EXPECT_NEAR(s.residual, 2.2845, 1e-3);
}

TEST(IkTip, RoundTripsRandomArcs) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> theta(1e-6, kPi / 2);
  std::uniform_real_distribution<double> phi(0.0, 2 * kPi);
  for (int i = 0; i < 1000; ++i) {
    const ArcParams arc{theta(rng), phi(rng), kLen};
    const IkSolution s = ik_tip(fk_tip(arc).position, kLen);
    EXPECT_NEAR(s.arc.theta, arc.theta, 1e-9);
    EXPECT_NEAR(std::remainder(s.arc.phi - arc.phi, 2 * kPi), 0.0, 1e-9);
    EXPECT_LT(s.residual, 1e-9);
  }
}

TEST(IkTip, Errors) {
  EXPECT_THROW(ik_tip({0, 0, 0}, kLen), Degenerate);
  EXPECT_THROW(ik_tip({1, 0, -1}, kLen), Unreachable);
  // 120 degrees of bend exceeds the default limit.
  EXPECT_THROW(ik_tip(fk_tip({2 * kPi / 3, 0.0, kLen}).position, kLen), Unreachable);
  EXPECT_NO_THROW(ik_tip(fk_tip({2 * kPi / 3, 0.0, kLen}).position, kLen, kPi));
}

TEST(ArcJacobian, PhiColumnVanishesWhenStraight) {
  const auto jac = arc_jacobian({0.0, 0.3, kLen});
  EXPECT_EQ(jac.col(1), Eigen::Vector3d::Zero());
  // d/dtheta at straight: (l/2 cos phi, l/2 sin phi, 0).
  EXPECT_NEAR(jac(0, 0), kLen / 2 * std::cos(0.3), 1e-12);
  EXPECT_NEAR(jac(2, 0), 0.0, 1e-12);
}

TEST(ArcJacobian, QuarterBendPhiColumn) {
  const auto jac = arc_jacobian({kPi / 2, 0.0, kLen});
  EXPECT_NEAR(jac(0, 1), 0.0, 1e-12);
  EXPECT_NEAR(jac(1, 1), kQuarterBendReach, 1e-12);
  EXPECT_NEAR(jac(2, 1), 0.0, 1e-12);
}

TEST(ArcJacobian, MatchesFiniteDifferencesOnGrid) {
  constexpr double h = 1e-6;
  for (int i = 0; i < 20; ++i) {
    const double theta = 0.05 + (kPi / 2 - 0.05) * i / 19.0;
    for (int j = 0; j < 20; ++j) {
      const double phi = 2 * kPi * j / 20.0;
      const auto jac = arc_jacobian({theta, phi, kLen});
      const Eigen::Vector3d d_theta = oracle::central_difference(
          [&](double t) { return fk_tip({t, phi, kLen}).position; }, theta, h);
      const Eigen::Vector3d d_phi = oracle::central_difference(
          [&](double p) { return fk_tip({theta, p, kLen}).position; }, phi, h);
      for (int r = 0; r < 3; ++r) {
        for (const auto& [analytic, numeric] :
             {std::pair{jac(r, 0), d_theta(r)}, std::pair{jac(r, 1), d_phi(r)}}) {
          if (std::abs(analytic) > 1e-3) {
            EXPECT_LT(std::abs(analytic - numeric) / std::abs(analytic), 1e-6)
                << "theta=" << theta << " phi=" << phi << " row=" << r;
          }
        }
      }
    }
  }
}

TEST(WrapTwoPi, Range) {
  EXPECT_DOUBLE_EQ(wrap_two_pi(-kPi / 2), 3 * kPi / 2);
  EXPECT_DOUBLE_EQ(wrap_two_pi(2 * kPi), 0.0);
  EXPECT_LT(wrap_two_pi(-1e-18), 2 * kPi);
}
