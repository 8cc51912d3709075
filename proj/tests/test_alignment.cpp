#include "support.hpp"

#include <gtest/gtest.h>

using namespace evtest;

namespace {

Trajectory random_trajectory(std::mt19937_64& rng, std::size_t n, double dt = 0.01) {
  std::vector<TrajectorySample> s;
  for (std::size_t i = 0; i < n; ++i) s.push_back({dt * static_cast<double>(i), random_pose(rng, 3.0)});
  return Trajectory(std::move(s));
}

std::vector<AssociatedPair> pairs_of(const Trajectory& gt, const Trajectory& est) {
  std::vector<AssociatedPair> p;
  for (std::size_t i = 0; i < gt.size(); ++i) p.push_back({gt[i].t, gt[i].pose, est[i].pose});
  return p;
}

double transform_distance(const SimilarityTransform& a, const SimilarityTransform& b) {
  return std::max(std::abs(a.scale - b.scale), max_abs_diff(a.pose, b.pose));
}

std::vector<MotionPair> exact_pairs(std::mt19937_64& rng, const Pose& x, int n) {
  std::vector<MotionPair> out;
  for (int i = 0; i < n; ++i) {
    const auto a = random_pose(rng, 1.0);
    out.push_back({a, x.inverse() * a * x});
  }
  return out;
}

}  // namespace

TEST(Associate, InterpolatesMidway) {
  const auto gt = line_trajectory({{0, 0, 0}, {2, 0, 0}}, 0.02);
  const Trajectory est({{0.01, Pose()}});
  const auto p = associate(est, gt, 0.02, AssociationMode::interpolate);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].t, 0.01);
  EXPECT_NEAR((p[0].pose_gt.translation() - Vec3(1, 0, 0)).norm(), 0.0, 1e-12);
}

TEST(Associate, DropsOutsideSpan) {
  const auto gt = line_trajectory({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, 0.5);
  const Trajectory est({{0.5, Pose()}, {5.0, Pose()}});
  EXPECT_EQ(associate(est, gt, 0.02, AssociationMode::interpolate).size(), 1u);
  EXPECT_EQ(associate(est, gt, 0.02, AssociationMode::nearest).size(), 1u);
}

TEST(Associate, SameTimestampsCopyExactly) {
  std::mt19937_64 rng(20);
  const auto gt = random_trajectory(rng, 50);
  const auto est = random_trajectory(rng, 50);
  for (auto mode : {AssociationMode::interpolate, AssociationMode::nearest}) {
    const auto p = associate(est, gt, default_max_dt(gt), mode);
    ASSERT_EQ(p.size(), 50u);
    for (std::size_t i = 0; i < 50; ++i) {
      EXPECT_EQ(p[i].pose_gt, gt[i].pose);
      EXPECT_EQ(p[i].pose_est, est[i].pose);
      EXPECT_EQ(p[i].t, est[i].t);
    }
  }
}

TEST(Associate, NearestRespectsMaxDt) {
  const auto gt = line_trajectory({{0, 0, 0}, {1, 0, 0}}, 1.0);
  const Trajectory est({{0.3, Pose()}, {0.5, Pose()}});
  const auto p = associate(est, gt, 0.3, AssociationMode::nearest);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].pose_gt.translation(), Vec3(0, 0, 0));
}

TEST(Associate, InterpolateNeedsBothNeighboursWithinMaxDt) {
  const auto gt = line_trajectory({{0, 0, 0}, {1, 0, 0}}, 1.0);
  const Trajectory est({{0.5, Pose()}});
  EXPECT_THROW(associate(est, gt, 0.4, AssociationMode::interpolate), NoOverlapError);
  EXPECT_EQ(associate(est, gt, 0.5, AssociationMode::interpolate).size(), 1u);
}

TEST(Associate, NoOverlapMessage) {
  const auto gt = line_trajectory({{0, 0, 0}, {1, 0, 0}}, 1.0);
  const Trajectory est({{10.0, Pose()}});
  try {
    associate(est, gt, 0.1, AssociationMode::interpolate);
    FAIL();
  } catch (const NoOverlapError& e) {
    EXPECT_STREQ(e.what(), "no temporal overlap");
  }
}

TEST(Associate, DefaultMaxDt) {
  const auto gt = line_trajectory({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}}, 0.01);
  EXPECT_NEAR(default_max_dt(gt), 0.015, 1e-15);
}

TEST(Umeyama, IdentityOnEqualTrajectories) {
  std::mt19937_64 rng(21);
  const auto gt = random_trajectory(rng, 20);
  const auto s = umeyama_align(pairs_of(gt, gt), true);
  EXPECT_NEAR(s.scale, 1.0, 1e-12);
  EXPECT_LE(pose_norm(s.pose), 1e-12);
}

TEST(Umeyama, RecoversRigidTransform) {
  std::mt19937_64 rng(22);
  for (int k = 0; k < 100; ++k) {
    const auto gt = random_trajectory(rng, 30);
    const SimilarityTransform truth{1.0, random_pose(rng, 10.0)};
    const auto est = transform_trajectory(gt, truth);
    const auto s = umeyama_align(pairs_of(gt, est), false);
    EXPECT_LE(transform_distance(s, truth.inverse()), 1e-9);
  }
}

TEST(Umeyama, RecoversSimilarity) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> sc(0.1, 10.0);
  for (int k = 0; k < 100; ++k) {
    const auto gt = random_trajectory(rng, 30);
    const SimilarityTransform truth{sc(rng), random_pose(rng, 10.0)};
    const auto s = umeyama_align(pairs_of(gt, transform_trajectory(gt, truth)), true);
    EXPECT_LE(transform_distance(s, truth.inverse()), 1e-8);
  }
}

TEST(Umeyama, HalfScaleGivesTwo) {
  std::mt19937_64 rng(24);
  const auto gt = random_trajectory(rng, 10);
  const auto s = umeyama_align(pairs_of(gt, transform_trajectory(gt, {0.5, Pose()})), true);
  EXPECT_NEAR(s.scale, 2.0, 1e-12);
}

TEST(Umeyama, Degenerate) {
  const auto line = line_trajectory({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}});
  EXPECT_THROW(umeyama_align(pairs_of(line, line), false), DegenerateGeometryError);
  const auto two = line_trajectory({{0, 0, 0}, {1, 1, 0}});
  EXPECT_THROW(umeyama_align(pairs_of(two, two), false), DegenerateGeometryError);
  const auto same = line_trajectory({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
  EXPECT_THROW(umeyama_align(pairs_of(same, same), true), DegenerateGeometryError);
}

TEST(Umeyama, ScaleNeverIncreasesResidual) {
  std::mt19937_64 rng(25);
  std::normal_distribution<double> g(0.0, 0.05);
  for (int k = 0; k < 200; ++k) {
    const auto gt = random_trajectory(rng, 15);
    std::vector<TrajectorySample> noisy;
    const SimilarityTransform t{std::uniform_real_distribution<double>(0.5, 2.0)(rng), random_pose(rng)};
    for (const auto& s : gt) noisy.push_back({s.t, t * Pose(s.pose.rotation(), s.pose.translation() + Vec3(g(rng), g(rng), g(rng)))});
    const auto p = pairs_of(gt, Trajectory(noisy));
    const double rigid = alignment_residual(p, umeyama_align(p, false));
    const double sim = alignment_residual(p, umeyama_align(p, true));
    EXPECT_LE(sim, rigid * (1 + 1e-12) + 1e-15);
  }
}

TEST(TransformTrajectory, Basics) {
  std::mt19937_64 rng(26);
  const auto gt = random_trajectory(rng, 10);
  EXPECT_EQ(transform_trajectory(gt, SimilarityTransform::identity()), gt);
  const Vec3 d(1, -2, 3);
  const auto shifted = transform_trajectory(gt, {1.0, Pose::from_translation(d)});
  for (std::size_t i = 0; i < gt.size(); ++i) {
    EXPECT_NEAR((shifted[i].pose.translation() - gt[i].pose.translation() - d).norm(), 0.0, 1e-12);
    EXPECT_EQ(shifted[i].t, gt[i].t);
  }
  const auto doubled = transform_trajectory(gt, {2.0, random_pose(rng)});
  for (std::size_t i = 0; i + 1 < gt.size(); ++i) {
    const double a = (gt[i + 1].pose.translation() - gt[i].pose.translation()).norm();
    const double b = (doubled[i + 1].pose.translation() - doubled[i].pose.translation()).norm();
    EXPECT_NEAR(b, 2 * a, 1e-12);
  }
}

// ---------------------------------------------------------------------------

TEST(HandEye, IdentityWhenMotionsEqual) {
  std::mt19937_64 rng(30);
  std::vector<MotionPair> p;
  for (int i = 0; i < 5; ++i) {
    const auto a = random_pose(rng);
    p.push_back({a, a});
  }
  const auto r = solve_hand_eye(p);
  EXPECT_LE(r.residual, 1e-20);
  EXPECT_LE(pose_norm(r.x), 1e-9);
}

TEST(HandEye, RecoversRandomX) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 200; ++k) {
    const auto x = random_pose(rng, 0.5);
    const auto r = solve_hand_eye(exact_pairs(rng, x, 10));
    EXPECT_LE(pose_norm(r.x.inverse() * x), 1e-6);
    EXPECT_LE(r.residual, 1e-12);
  }
}

TEST(HandEye, TwoPairsSuffice) {
  std::mt19937_64 rng(32);
  const auto x = random_pose(rng, 0.5);
  EXPECT_LE(pose_norm(solve_hand_eye(exact_pairs(rng, x, 2)).x.inverse() * x), 1e-6);
}

TEST(HandEye, FromAbsolutePoses) {
  std::mt19937_64 rng(33);
  const auto x = random_pose(rng, 0.3);
  const auto target = random_pose(rng, 2.0);  // eye-frame reference
  std::vector<Pose> hand, eye;
  for (int i = 0; i < 12; ++i) {
    hand.push_back(random_pose(rng));
    eye.push_back(target * hand.back() * x);
  }
  const auto r = solve_hand_eye(motion_pairs_from_poses(hand, eye));
  EXPECT_LE(pose_norm(r.x.inverse() * x), 1e-6);
}

TEST(HandEye, InvariantUnderCommonWorldFrame) {
  std::mt19937_64 rng(34);
  for (int k = 0; k < 50; ++k) {
    const auto x = random_pose(rng, 0.5);
    const auto g = random_pose(rng, 3.0);
    std::vector<Pose> hand, hand_moved, eye;
    for (int i = 0; i < 10; ++i) {
      hand.push_back(random_pose(rng));
      hand_moved.push_back(g * hand.back());
      eye.push_back(hand.back() * x);
    }
    const auto a = solve_hand_eye(motion_pairs_from_poses(hand, eye)).x;
    const auto b = solve_hand_eye(motion_pairs_from_poses(hand_moved, eye)).x;
    EXPECT_LE(max_abs_diff(a, b), 1e-8);
  }
}

TEST(HandEye, SingleAxisIsUnobservable) {
  std::mt19937_64 rng(35);
  const auto x = random_pose(rng, 0.5);
  std::vector<MotionPair> p;
  for (double ang : {0.3, -0.7, 1.1, 2.0}) {
    const Pose a(Rotation::about_axis(Vec3(1, 2, 3).normalized(), ang), random_vec(rng));
    p.push_back({a, x.inverse() * a * x});
  }
  try {
    solve_hand_eye(p);
    FAIL();
  } catch (const DegenerateGeometryError& e) {
    EXPECT_NE(std::string(e.what()).find("unobservable translation"), std::string::npos);
  }
}

TEST(HandEye, TooFewPairs) {
  std::mt19937_64 rng(36);
  EXPECT_THROW(solve_hand_eye(exact_pairs(rng, Pose(), 1)), DegenerateGeometryError);
}

TEST(HandEye, NoisyPairsStayClose) {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> g(0.0, 1e-4);
  const auto x = random_pose(rng, 0.5);
  auto p = exact_pairs(rng, x, 30);
  for (auto& m : p) m.b = Pose(m.b.rotation() * Rotation::exp(Vec3(g(rng), g(rng), g(rng))), m.b.translation() + Vec3(g(rng), g(rng), g(rng)));
  EXPECT_LE(pose_norm(solve_hand_eye(p).x.inverse() * x), 1e-2);
}
