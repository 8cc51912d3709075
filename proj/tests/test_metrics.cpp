#include "support.hpp"

#include <gtest/gtest.h>

using namespace evtest;

namespace {

std::vector<AssociatedPair> pairs_from(const Trajectory& gt, const Trajectory& est) {
  std::vector<AssociatedPair> p;
  for (std::size_t i = 0; i < gt.size(); ++i) p.push_back({gt[i].t, gt[i].pose, est[i].pose});
  return p;
}

ErrorSeries series(std::vector<double> v, ErrorKind kind = ErrorKind::rve) {
  ErrorSeries s{kind, {}, std::move(v)};
  for (std::size_t i = 0; i < s.value.size(); ++i) s.t.push_back(static_cast<double>(i));
  return s;
}

std::vector<VelocitySample> speeds(std::initializer_list<double> s) {
  std::vector<VelocitySample> out;
  for (double v : s) out.push_back({0.0, {v, 0, 0}, Vec3(0, 0, 0)});
  return out;
}

// S(ξ) by direct enumeration.
double s_oracle(const std::vector<double>& rve, const std::vector<double>& w, double xi) {
  double s = 0;
  for (std::size_t i = 0; i < rve.size(); ++i) s += rve[i] < xi ? w[i] : 0.0;
  return s;
}

Trajectory random_walk(std::mt19937_64& rng, std::size_t n) {
  std::vector<TrajectorySample> s;
  Pose p;
  for (std::size_t i = 0; i < n; ++i) {
    p = p * exp_se3({random_vec(rng, 0.1), random_vec(rng, 0.05)});
    s.push_back({0.01 * static_cast<double>(i), p});
  }
  return Trajectory(std::move(s));
}

}  // namespace

TEST(Ate, ZeroForIdenticalTrajectories) {
  std::mt19937_64 rng(40);
  const auto gt = random_walk(rng, 100);
  for (double v : ate_series(pairs_from(gt, gt), PosePart::translation_only).value) EXPECT_EQ(v, 0.0);
  // the SE(3) error goes through a composition, which rounds
  for (double v : ate_series(pairs_from(gt, gt), PosePart::full_se3).value) EXPECT_LE(v, 1e-14);
}

TEST(Ate, ConstantOffsetGivesFive) {
  std::mt19937_64 rng(41);
  const auto gt = random_walk(rng, 100);
  std::vector<TrajectorySample> est;
  for (const auto& s : gt) est.push_back({s.t, Pose(s.pose.rotation(), s.pose.translation() + Vec3(0, 3, 4))});
  for (double v : ate_series(pairs_from(gt, Trajectory(est)), PosePart::translation_only).value) EXPECT_NEAR(v, 5.0, 1e-12);
}

TEST(Ate, RelativeQuarterTurnFullSe3) {
  std::mt19937_64 rng(42);
  const auto gt = random_walk(rng, 50);
  std::vector<TrajectorySample> est;
  for (const auto& s : gt) est.push_back({s.t, s.pose * Pose::from_rotation(Rotation::rot_z(kPi / 2))});
  for (double v : ate_series(pairs_from(gt, Trajectory(est)), PosePart::full_se3).value) EXPECT_NEAR(v, kPi / 2, 1e-12);
}

TEST(Rpe, ConstantGlobalOffsetCancels) {
  std::mt19937_64 rng(43);
  const auto gt = random_walk(rng, 100);
  const auto g = random_pose(rng, 5.0);
  std::vector<TrajectorySample> est;
  for (const auto& s : gt) est.push_back({s.t, g * s.pose});
  for (auto part : {PosePart::translation_only, PosePart::full_se3}) {
    for (double v : rpe_series(pairs_from(gt, Trajectory(est)), 5, part).value) EXPECT_NEAR(v, 0.0, 1e-9);
  }
}

TEST(Rpe, StretchedLine) {
  std::vector<Vec3> a, b;
  for (int i = 0; i < 20; ++i) {
    a.emplace_back(i, 0, 0);
    b.emplace_back(1.1 * i, 0, 0);
  }
  const auto s = rpe_series(pairs_from(line_trajectory(a), line_trajectory(b)), 1, PosePart::translation_only);
  ASSERT_EQ(s.size(), 19u);
  for (double v : s.value) EXPECT_NEAR(v, 0.1, 1e-12);
}

TEST(Rpe, DeltaBounds) {
  std::mt19937_64 rng(44);
  const auto p = pairs_from(random_walk(rng, 10), random_walk(rng, 10));
  EXPECT_THROW(rpe_series(p, 0, PosePart::full_se3), std::invalid_argument);
  EXPECT_THROW(rpe_series(p, 10, PosePart::full_se3), std::invalid_argument);
  EXPECT_EQ(rpe_series(p, 9, PosePart::full_se3).size(), 1u);
}

TEST(Rpe, DefaultDeltaIsOneSecond) {
  std::mt19937_64 rng(45);
  const auto gt = random_walk(rng, 300);  // 100 Hz
  EXPECT_EQ(default_rpe_delta(pairs_from(gt, gt)), 100u);
}

TEST(Metrics, GlobalFrameInvariance) {
  std::mt19937_64 rng(46);
  for (int k = 0; k < 20; ++k) {
    const auto gt = random_walk(rng, 60);
    const auto est = random_walk(rng, 60);
    const auto g = random_pose(rng, 10.0);
    const auto p = pairs_from(gt, est);
    auto q = p;
    for (auto& x : q) {
      x.pose_gt = g * x.pose_gt;
      x.pose_est = g * x.pose_est;
    }
    for (auto part : {PosePart::translation_only, PosePart::full_se3}) {
      const auto a = ate_series(p, part), b = ate_series(q, part);
      for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.value[i], b.value[i], 1e-9);
      const auto c = rpe_series(p, 3, part), d = rpe_series(q, 3, part);
      for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(c.value[i], d.value[i], 1e-9);
    }
  }
}

TEST(Aggregate, Modes) {
  const auto s = series({2, 2, 2, 2}, ErrorKind::ate);
  EXPECT_DOUBLE_EQ(aggregate(s, Aggregation::rms), 2.0);
  EXPECT_DOUBLE_EQ(aggregate(s, Aggregation::paper_eq2), 1.0);
  const auto one = series({0.7}, ErrorKind::ate);
  EXPECT_EQ(aggregate(one, Aggregation::rms), 0.7);
  EXPECT_EQ(aggregate(one, Aggregation::paper_eq2), 0.7);
  EXPECT_THROW(aggregate(series({}), Aggregation::rms), std::invalid_argument);
}

TEST(Aggregate, RmsIsSqrtNTimesLiteral) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int k = 0; k < 1000; ++k) {
    std::vector<double> v(1 + k % 97);
    for (auto& x : v) x = u(rng);
    const auto s = series(v, ErrorKind::ate);
    const double rms = aggregate(s, Aggregation::rms);
    const double lit = std::sqrt(static_cast<double>(v.size())) * aggregate(s, Aggregation::paper_eq2);
    EXPECT_LE(std::abs(rms - lit), 4 * std::numeric_limits<double>::epsilon() * rms);
  }
}

TEST(Velocity, ConstantPoseIsZero) {
  std::vector<TrajectorySample> s;
  const Pose p(Rotation::rot_x(0.3), {1, 2, 3});
  for (int i = 0; i < 20; ++i) s.push_back({0.01 * i, p});
  for (const auto& v : derive_velocities(Trajectory(s), 2).samples) {
    EXPECT_LE(v.v.norm(), 1e-12);
    EXPECT_LE(v.omega->norm(), 1e-12);
  }
}

TEST(Velocity, CircleAgainstAnalytic) {
  // Circle r=2, Ω=1 sampled at 120 Hz, written out independently of the synth module.
  std::vector<TrajectorySample> s;
  for (int i = 0; i <= 1200; ++i) {
    const double t = i / 120.0;
    s.push_back({t, Pose(Rotation::rot_z(t + kPi / 2), {2 * std::cos(t), 2 * std::sin(t), 0})});
  }
  const auto d = derive_velocities(Trajectory(s), 2);
  EXPECT_TRUE(d.warnings.empty());
  for (std::size_t i = 60; i + 60 < d.samples.size(); ++i) {
    EXPECT_NEAR(d.samples[i].v.norm(), 2.0, 1e-3);
    EXPECT_NEAR(d.samples[i].omega->norm(), 1.0, 1e-3);
    const double t = s[i].t;
    EXPECT_NEAR((d.samples[i].v - Vec3(-2 * std::sin(t), 2 * std::cos(t), 0)).norm(), 0.0, 1e-3);
  }
}

TEST(Velocity, ConstantSpin) {
  std::vector<TrajectorySample> s;
  for (int i = 0; i <= 600; ++i) s.push_back({i / 120.0, Pose::from_rotation(Rotation::rot_z(3.0 * i / 120.0))});
  const auto d = derive_velocities(Trajectory(s), 2);
  for (const auto& v : d.samples) EXPECT_NEAR(v.omega->norm(), 3.0, 1e-3);
}

TEST(Velocity, NonUniformSamplingWarns) {
  std::vector<TrajectorySample> s;
  for (int i = 0; i < 10; ++i) s.push_back({0.01 * i, Pose()});
  s.push_back({5.0, Pose()});
  const auto d = derive_velocities(Trajectory(s), 0);
  ASSERT_EQ(d.warnings.size(), 1u);
  EXPECT_NE(d.warnings[0].find("non-uniform"), std::string::npos);
  EXPECT_THROW(derive_velocities(line_trajectory({{0, 0, 0}, {1, 0, 0}}), 0), std::invalid_argument);
}

TEST(Velocity, InterpolateLinearAndClamped) {
  const std::vector<VelocitySample> v{{0.0, {0, 0, 0}, Vec3(0, 0, 0)}, {1.0, {2, 0, 0}, Vec3(0, 0, 4)}};
  const std::vector<double> t{-1.0, 0.25, 1.0, 3.0};
  const auto r = interpolate_velocities(v, t);
  EXPECT_EQ(r[0].v, Vec3(0, 0, 0));
  EXPECT_EQ(r[1].v, Vec3(0.5, 0, 0));
  EXPECT_EQ(*r[1].omega, Vec3(0, 0, 1));
  EXPECT_EQ(r[2].v, Vec3(2, 0, 0));
  EXPECT_EQ(r[3].v, Vec3(2, 0, 0));
}

TEST(Rve, Examples) {
  const auto gt = speeds({2.0, 1.0, 0.0});
  auto est = speeds({2.2, 1.0, 0.3});
  const auto r = rve_series(gt, est, 0.05);
  EXPECT_NEAR(r.ave.value[0], 0.2, 1e-15);
  EXPECT_NEAR(r.rve.value[0], 0.1, 1e-15);
  EXPECT_EQ(r.ave.value[1], 0.0);
  EXPECT_EQ(r.rve.value[1], 0.0);
  EXPECT_EQ(r.rve.size(), 2u);
  EXPECT_EQ(r.excluded, 1u);
  EXPECT_EQ(r.ave.size(), 3u);
}

TEST(Rve, FloorAndErrors) {
  EXPECT_EQ(rve_series(speeds({0.04, 0.05}), speeds({0.0, 0.0}), 0.05).excluded, 1u);
  EXPECT_THROW(rve_series(speeds({}), speeds({}), 0.05), NoOverlapError);
  EXPECT_THROW(rve_series(speeds({1}), speeds({1, 2}), 0.05), std::invalid_argument);
}

TEST(Weights, Schemes) {
  const auto w = weights(speeds({1, 3}), WeightScheme::velocity);
  EXPECT_EQ(w, (std::vector<double>{0.25, 0.75}));
  const auto u = weights(speeds({1, 3, 5}), WeightScheme::uniform);
  for (double x : u) EXPECT_EQ(x, 1.0 / 3);
  const std::vector<VelocitySample> two(2, {0.0, {1, 0, 0}, Vec3(0, 0, 1)});
  EXPECT_EQ(weights(two, WeightScheme::combined), (std::vector<double>{0.5, 0.5}));
}

TEST(Weights, SumToOne) {
  std::mt19937_64 rng(48);
  for (int k = 0; k < 100; ++k) {
    std::vector<VelocitySample> v;
    for (int i = 0; i < 1 + k * 7; ++i) v.push_back({0.0, random_vec(rng, 5), random_vec(rng, 2)});
    for (auto scheme : {WeightScheme::uniform, WeightScheme::velocity, WeightScheme::combined}) {
      const auto w = weights(v, scheme);
      EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
    }
  }
}

TEST(Weights, Errors) {
  EXPECT_THROW(weights(speeds({0, 0}), WeightScheme::velocity), std::invalid_argument);
  const std::vector<VelocitySample> no_omega{{0.0, {1, 0, 0}, std::nullopt}};
  EXPECT_THROW(weights(no_omega, WeightScheme::combined), std::invalid_argument);
  EXPECT_NO_THROW(weights(no_omega, WeightScheme::velocity));
}

TEST(PrecisionCurve, Enumeration) {
  const std::vector<double> xi{0.2};
  const auto c = precision_curve(series({0.05, 0.15, 0.25}), std::vector<double>(3, 1.0 / 3), xi);
  EXPECT_DOUBLE_EQ(c.s[0], 2.0 / 3);
}

TEST(PrecisionCurve, StrictInequalityStep) {
  const auto grid = make_xi_grid(1.0, 256);
  const auto c = precision_curve(series(std::vector<double>(5, 0.1)), weights(speeds({1, 2, 3, 4, 5}), WeightScheme::velocity), grid);
  for (std::size_t k = 0; k < grid.size(); ++k) EXPECT_EQ(c.s[k], grid[k] > 0.1 ? 1.0 : 0.0);
  const std::vector<double> at{0.1};
  EXPECT_EQ(precision_curve(series({0.1}), std::vector<double>{1.0}, at).s[0], 0.0);
}

TEST(PrecisionCurve, WeightedDivergenceFixture) {
  const std::vector<double> xi{0.1};
  const auto rve = series({0.5, 0.05});
  EXPECT_EQ(precision_curve(rve, weights(speeds({1, 3}), WeightScheme::velocity), xi).s[0], 0.75);
  EXPECT_EQ(precision_curve(rve, weights(speeds({1, 3}), WeightScheme::uniform), xi).s[0], 0.5);
}

TEST(PrecisionCurve, MatchesEnumerationOracle) {
  std::mt19937_64 rng(49);
  std::uniform_real_distribution<double> u(0.0, 1.2);
  const auto grid = make_xi_grid(1.0, 101);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> r(1 + k);
    for (auto& x : r) x = std::round(u(rng) * 100) / 100;  // ties with grid points
    std::vector<VelocitySample> v;
    for (std::size_t i = 0; i < r.size(); ++i) v.push_back({0.0, random_vec(rng, 3), random_vec(rng)});
    const auto w = weights(v, WeightScheme::velocity);
    const auto c = precision_curve(series(r), w, grid);
    for (std::size_t j = 0; j < grid.size(); ++j) EXPECT_NEAR(c.s[j], s_oracle(r, w, grid[j]), 1e-12);
  }
}

TEST(PrecisionCurve, Properties) {
  std::mt19937_64 rng(50);
  std::uniform_real_distribution<double> u(0.0, 0.8);
  const auto grid = make_xi_grid(1.0, 256);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> r(1 + k % 50);
    for (auto& x : r) x = u(rng);
    std::vector<VelocitySample> v;
    for (std::size_t i = 0; i < r.size(); ++i) v.push_back({0.0, random_vec(rng, 3), random_vec(rng)});
    const double max_rve = *std::max_element(r.begin(), r.end());
    for (auto scheme : {WeightScheme::uniform, WeightScheme::velocity, WeightScheme::combined}) {
      const auto c = precision_curve(series(r), weights(v, scheme), grid);
      for (std::size_t j = 0; j < grid.size(); ++j) {
        ASSERT_GE(c.s[j], 0.0);
        ASSERT_LE(c.s[j], 1.0);
        if (j) ASSERT_GE(c.s[j], c.s[j - 1]);
        if (grid[j] > max_rve) ASSERT_EQ(c.s[j], 1.0);
      }
    }
  }
}

TEST(PrecisionCurve, EqualRveIsWeightInvariant) {
  std::mt19937_64 rng(51);
  const auto grid = make_xi_grid(1.0, 256);
  std::vector<VelocitySample> v;
  for (int i = 0; i < 37; ++i) v.push_back({0.0, random_vec(rng, 3), random_vec(rng)});
  const auto r = series(std::vector<double>(37, 0.3719));
  const auto a = precision_curve(r, weights(v, WeightScheme::uniform), grid);
  const auto b = precision_curve(r, weights(v, WeightScheme::velocity), grid);
  const auto c = precision_curve(r, weights(v, WeightScheme::combined), grid);
  EXPECT_EQ(a.s, b.s);
  EXPECT_EQ(a.s, c.s);
}

TEST(Auc, Examples) {
  const auto grid = make_xi_grid(1.0, 256);
  PrecisionCurve ones{grid, std::vector<double>(grid.size(), 1.0), WeightScheme::uniform};
  PrecisionCurve zeros{grid, std::vector<double>(grid.size(), 0.0), WeightScheme::uniform};
  EXPECT_EQ(curve_auc(ones, 1.0), 1.0);
  EXPECT_EQ(curve_auc(zeros, 1.0), 0.0);
  const auto step = precision_curve(series({0.3}), std::vector<double>{1.0}, grid);
  EXPECT_NEAR(curve_auc(step, 1.0), 0.7, 1.0 / 255);
  EXPECT_THROW(curve_auc(ones, 1.5), std::invalid_argument);
}

TEST(Auc, PartialRange) {
  const std::vector<double> x{0.0, 0.5, 1.0};
  PrecisionCurve c{x, {0.0, 1.0, 1.0}, WeightScheme::uniform};
  EXPECT_DOUBLE_EQ(curve_auc(c, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(curve_auc(c, 0.25), 0.25);
}

TEST(Auc, MonotoneInRve) {
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto grid = make_xi_grid(1.0, 256);
  for (int k = 0; k < 300; ++k) {
    std::vector<double> a(1 + k % 40), b;
    for (auto& x : a) x = u(rng) * 1.3;
    for (double x : a) b.push_back(x * u(rng));
    std::vector<VelocitySample> v;
    for (std::size_t i = 0; i < a.size(); ++i) v.push_back({0.0, random_vec(rng, 3), random_vec(rng)});
    for (auto scheme : {WeightScheme::uniform, WeightScheme::velocity}) {
      const auto w = weights(v, scheme);
      EXPECT_GE(curve_auc(precision_curve(series(b), w, grid), 1.0), curve_auc(precision_curve(series(a), w, grid), 1.0));
    }
  }
}

TEST(XiGrid, Endpoints) {
  const auto g = make_xi_grid(0.5, 11);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 0.5);
  EXPECT_EQ(g.size(), 11u);
  EXPECT_THROW(make_xi_grid(1.0, 1), std::invalid_argument);
}
