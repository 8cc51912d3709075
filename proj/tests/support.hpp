#pragma once

#include "evbench/evbench.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace evtest {

using namespace evbench;

inline constexpr double kPi = std::numbers::pi;

inline Vec3 random_vec(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

inline Rotation random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return Rotation(g(rng), g(rng), g(rng), g(rng));
}

inline Pose random_pose(std::mt19937_64& rng, double tscale = 2.0) { return {random_rotation(rng), random_vec(rng, tscale)}; }

inline double max_abs_diff(const Pose& a, const Pose& b) {
  const double dr = (a.rotation().matrix() - b.rotation().matrix()).cwiseAbs().maxCoeff();
  const double dt = (a.translation() - b.translation()).cwiseAbs().maxCoeff();
  return std::max(dr, dt);
}

/// Random sorted event stream; timestamps may repeat.
inline EventStream random_stream(std::mt19937_64& rng, std::size_t n, int w, int h, std::int64_t span_us) {
  EventStream s{w, h, "rnd", {}};
  std::uniform_int_distribution<std::int64_t> t(0, span_us);
  std::uniform_int_distribution<int> x(0, w - 1), y(0, h - 1), p(0, 1);
  std::vector<std::int64_t> ts(n);
  for (auto& v : ts) v = t(rng);
  std::sort(ts.begin(), ts.end());
  s.events.reserve(n);
  for (auto v : ts) {
    s.events.push_back({v, static_cast<std::uint16_t>(x(rng)), static_cast<std::uint16_t>(y(rng)),
                        static_cast<std::int8_t>(p(rng) ? 1 : -1)});
  }
  return s;
}

/// Trajectory from a list of positions at uniform spacing `dt`, identity rotations.
inline Trajectory line_trajectory(const std::vector<Vec3>& positions, double dt = 1.0, double t0 = 0.0) {
  std::vector<TrajectorySample> s;
  for (std::size_t i = 0; i < positions.size(); ++i) s.push_back({t0 + dt * static_cast<double>(i), Pose::from_translation(positions[i])});
  return Trajectory(std::move(s));
}

}  // namespace evtest
