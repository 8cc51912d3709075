#pragma once

// Analytic trajectories (with closed-form velocities), deterministic noise,
// and piecewise-constant Poisson event streams used as test fixtures.

#include "evbench/geometry.hpp"
#include "evbench/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace evbench::synth {

enum class PatternKind { line, circle, lemniscate, spin_circle };

inline PatternKind parse_pattern_kind(const std::string& s) {
  if (s == "line") return PatternKind::line;
  if (s == "circle") return PatternKind::circle;
  if (s == "lemniscate") return PatternKind::lemniscate;
  if (s == "spin_circle" || s == "spin-circle") return PatternKind::spin_circle;
  throw std::invalid_argument("unknown motion pattern '" + s + "'");
}

inline std::string_view to_string(PatternKind k) {
  switch (k) {
    case PatternKind::line: return "line";
    case PatternKind::circle: return "circle";
    case PatternKind::lemniscate: return "lemniscate";
    case PatternKind::spin_circle: return "spin_circle";
  }
  return "?";
}

struct MotionPattern {
  PatternKind kind = PatternKind::circle;
  double radius = 2.0;     // m; circle radius, lemniscate half-width
  double rate = 1.0;       // rad/s; angular rate along circle/lemniscate
  double speed = 1.0;      // m/s; line speed
  double spin_rate = 0.0;  // rad/s; body yaw rate of spin_circle
  double duration = 10.0;  // s
  double sample_hz = 120.0;
  double t0 = 0.0;
};

struct SynthTrajectory {
  Trajectory trajectory;
  std::vector<VelocitySample> velocities;  // exact analytic derivatives
};

namespace detail {

struct State {
  Vec3 p;
  Vec3 v;
  double yaw;
  double yaw_rate;
};

// Planar motions with the body rotating about world z.
inline State evaluate(const MotionPattern& m, double t) {
  const double w = m.rate;
  switch (m.kind) {
    case PatternKind::line:
      return {Vec3(m.speed * t, 0.0, 0.0), Vec3(m.speed, 0.0, 0.0), 0.0, 0.0};
    case PatternKind::circle: {
      const double a = w * t;
      return {Vec3(m.radius * std::cos(a), m.radius * std::sin(a), 0.0),
              Vec3(-m.radius * w * std::sin(a), m.radius * w * std::cos(a), 0.0), a + std::numbers::pi / 2, w};
    }
    case PatternKind::spin_circle: {
      const double a = w * t;
      return {Vec3(m.radius * std::cos(a), m.radius * std::sin(a), 0.0),
              Vec3(-m.radius * w * std::sin(a), m.radius * w * std::cos(a), 0.0), m.spin_rate * t, m.spin_rate};
    }
    case PatternKind::lemniscate: {
      // Gerono figure-eight, heading aligned with the velocity.
      const double a = w * t;
      const double r = m.radius;
      const Vec3 p(r * std::sin(a), 0.5 * r * std::sin(2 * a), 0.0);
      const Vec3 v(r * w * std::cos(a), r * w * std::cos(2 * a), 0.0);
      const Vec3 acc(-r * w * w * std::sin(a), -2 * r * w * w * std::sin(2 * a), 0.0);
      const double yaw_rate = (v.x() * acc.y() - v.y() * acc.x()) / v.head<2>().squaredNorm();
      return {p, v, std::atan2(v.y(), v.x()), yaw_rate};
    }
  }
  throw std::logic_error("unhandled pattern");
}

}  // namespace detail

/// Poses sampled at `sample_hz` over [t0, t0 + duration] with exact velocities
/// (v in the world frame, ω in the body frame).
inline SynthTrajectory synth_trajectory(const MotionPattern& m) {
  if (!(m.duration > 0.0) || !(m.sample_hz > 0.0)) throw std::invalid_argument("duration and sample rate must be positive");
  const auto n = static_cast<std::size_t>(std::floor(m.duration * m.sample_hz + 1e-9)) + 1;
  std::vector<TrajectorySample> samples;
  SynthTrajectory out;
  samples.reserve(n);
  out.velocities.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double tau = static_cast<double>(k) / m.sample_hz;
    const auto s = detail::evaluate(m, tau);
    samples.push_back({m.t0 + tau, Pose(Rotation::rot_z(s.yaw), s.p)});
    out.velocities.push_back({m.t0 + tau, s.v, Vec3(0.0, 0.0, s.yaw_rate)});
  }
  out.trajectory = Trajectory(std::move(samples));
  return out;
}

struct NoiseModel {
  double position_sigma = 0.0;  // m
  double rotation_sigma = 0.0;  // rad, per axis
  std::uint64_t seed = 0;
};

/// Adds isotropic Gaussian noise to positions and right-multiplies rotations by
/// exp(δφ); deterministic for a fixed seed, the identity for zero sigmas.
inline Trajectory perturb_trajectory(const Trajectory& traj, const NoiseModel& noise) {
  if (noise.position_sigma < 0.0 || noise.rotation_sigma < 0.0) throw std::invalid_argument("noise sigmas must be >= 0");
  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto draw = [&](double sigma) { return Vec3(sigma * gauss(rng), sigma * gauss(rng), sigma * gauss(rng)); };
  std::vector<TrajectorySample> out;
  out.reserve(traj.size());
  for (const auto& s : traj) {
    Pose p = s.pose;
    if (noise.position_sigma > 0.0) p = Pose(p.rotation(), p.translation() + draw(noise.position_sigma));
    if (noise.rotation_sigma > 0.0) p = Pose(p.rotation() * Rotation::exp(draw(noise.rotation_sigma)), p.translation());
    out.push_back({s.t, p});
  }
  return Trajectory(std::move(out));
}

/// Multiplies linear (and angular) velocities by `factor`.
inline std::vector<VelocitySample> scale_velocities(std::span<const VelocitySample> vel, double factor) {
  std::vector<VelocitySample> out(vel.begin(), vel.end());
  for (auto& s : out) {
    s.v *= factor;
    if (s.omega) *s.omega *= factor;
  }
  return out;
}

struct RateBreakpoint {
  double t = 0.0;     // s
  double rate = 0.0;  // events/s, held until the next breakpoint
};

struct RateProfile {
  std::vector<RateBreakpoint> breakpoints;  // ascending t
  double end = 0.0;                         // s
};

/// "t:rate,t:rate,...;end" e.g. "0:1000,5:5000;10".
inline RateProfile parse_rate_profile(const std::string& text) {
  RateProfile p;
  const auto semi = text.find(';');
  if (semi == std::string::npos) throw std::invalid_argument("rate profile needs ';end'");
  const auto end = evbench::detail::parse_number<double>(std::string_view(text).substr(semi + 1));
  if (!end) throw std::invalid_argument("bad profile end time");
  p.end = *end;
  for (auto item : evbench::detail::split_char(std::string_view(text).substr(0, semi), ',')) {
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("profile breakpoint needs 't:rate'");
    const auto t = evbench::detail::parse_number<double>(item.substr(0, colon));
    const auto r = evbench::detail::parse_number<double>(item.substr(colon + 1));
    if (!t || !r) throw std::invalid_argument("bad profile breakpoint '" + std::string(item) + "'");
    p.breakpoints.push_back({*t, *r});
  }
  return p;
}

/// Piecewise-constant Poisson process with uniformly random pixels and
/// polarities; timestamps in integer microseconds, deterministic per seed.
inline EventStream synth_event_rate_stream(const RateProfile& profile, int width, int height, std::uint64_t seed,
                                           std::string camera_id = "synth") {
  if (width <= 0 || height <= 0) throw std::invalid_argument("resolution must be positive");
  const auto& bp = profile.breakpoints;
  for (std::size_t i = 0; i < bp.size(); ++i) {
    if (bp[i].rate < 0.0) throw std::invalid_argument("event rates must be non-negative");
    if (i > 0 && !(bp[i].t > bp[i - 1].t)) throw std::invalid_argument("breakpoints must be ascending");
  }
  EventStream s{width, height, std::move(camera_id), {}};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> px(0, width - 1), py(0, height - 1), pol(0, 1);
  for (std::size_t i = 0; i < bp.size(); ++i) {
    const double t_lo = bp[i].t;
    const double t_hi = i + 1 < bp.size() ? bp[i + 1].t : profile.end;
    if (!(t_hi > t_lo) || bp[i].rate == 0.0) continue;
    std::poisson_distribution<std::int64_t> count(bp[i].rate * (t_hi - t_lo));
    const std::int64_t n = count(rng);
    std::uniform_real_distribution<double> when(t_lo, t_hi);
    std::vector<std::int64_t> ts(static_cast<std::size_t>(n));
    for (auto& t : ts) t = static_cast<std::int64_t>(std::floor(when(rng) * 1e6));
    std::sort(ts.begin(), ts.end());
    for (auto t : ts) {
      s.events.push_back({t, static_cast<std::uint16_t>(px(rng)), static_cast<std::uint16_t>(py(rng)),
                          static_cast<std::int8_t>(pol(rng) ? 1 : -1)});
    }
  }
  return s;
}

}  // namespace evbench::synth
