#pragma once

// Trajectory and velocity error metrics:
//   ATE_i = ‖log(T_gt,i⁻¹ T_est,i)∨‖, RPE_i over a step of Δ samples,
//   aggregation (conventional RMS or 1/n outside the root),
//   AVE_i = ‖v_gt,i − v_est,i‖, RVE_i = AVE_i / ‖v_gt,i‖,
//   the weighted precision curve S(ξ) = Σ w_i·1(RVE_i < ξ) and its AUC.

#include "evbench/alignment.hpp"
#include "evbench/geometry.hpp"
#include "evbench/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace evbench {

enum class ErrorKind { ate, rpe, ave, rve };
enum class PosePart { full_se3, translation_only };
enum class Aggregation { rms, paper_eq2 };
enum class WeightScheme { uniform, velocity, combined };

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::ate: return "ate";
    case ErrorKind::rpe: return "rpe";
    case ErrorKind::ave: return "ave";
    case ErrorKind::rve: return "rve";
  }
  return "?";
}
inline std::string_view to_string(PosePart p) { return p == PosePart::full_se3 ? "full_se3" : "translation_only"; }
inline std::string_view to_string(Aggregation a) { return a == Aggregation::rms ? "rms" : "paper_eq2"; }
inline std::string_view to_string(WeightScheme w) {
  switch (w) {
    case WeightScheme::uniform: return "uniform";
    case WeightScheme::velocity: return "velocity";
    case WeightScheme::combined: return "combined";
  }
  return "?";
}

struct ErrorSeries {
  ErrorKind kind = ErrorKind::ate;
  std::vector<double> t;
  std::vector<double> value;

  std::size_t size() const { return value.size(); }
  bool empty() const { return value.empty(); }
};

namespace detail {

inline double part_norm(const Pose& p, PosePart part) {
  return part == PosePart::full_se3 ? pose_norm(p) : p.translation().norm();
}

inline double median_of(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty list");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace detail

/// Per-pair absolute error; translation_only is ‖p_gt − p_est‖ in meters.
inline ErrorSeries ate_series(std::span<const AssociatedPair> pairs, PosePart part) {
  if (pairs.empty()) throw std::invalid_argument("ATE needs at least one pair");
  ErrorSeries s{ErrorKind::ate, {}, {}};
  s.t.reserve(pairs.size());
  s.value.reserve(pairs.size());
  for (const auto& p : pairs) {
    s.t.push_back(p.t);
    s.value.push_back(part == PosePart::full_se3 ? pose_norm(p.pose_gt.inverse() * p.pose_est)
                                                 : (p.pose_gt.translation() - p.pose_est.translation()).norm());
  }
  return s;
}

/// Discrepancy between ground-truth and estimated motion over `delta` samples.
inline ErrorSeries rpe_series(std::span<const AssociatedPair> pairs, std::size_t delta, PosePart part) {
  if (delta < 1) throw std::invalid_argument("RPE delta must be at least 1");
  if (delta >= pairs.size()) {
    throw std::invalid_argument("RPE delta " + std::to_string(delta) + " needs more than " + std::to_string(pairs.size()) + " pairs");
  }
  ErrorSeries s{ErrorKind::rpe, {}, {}};
  const std::size_t n = pairs.size() - delta;
  s.t.reserve(n);
  s.value.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Pose rel_gt = pairs[i].pose_gt.inverse() * pairs[i + delta].pose_gt;
    const Pose rel_est = pairs[i].pose_est.inverse() * pairs[i + delta].pose_est;
    s.t.push_back(pairs[i].t);
    s.value.push_back(detail::part_norm(rel_gt.inverse() * rel_est, part));
  }
  return s;
}

/// Number of samples closest to one second of motion, clamped to [1, n−1].
inline std::size_t default_rpe_delta(std::span<const AssociatedPair> pairs) {
  if (pairs.size() < 2) throw std::invalid_argument("RPE needs at least 2 pairs");
  std::vector<double> dt;
  for (std::size_t i = 1; i < pairs.size(); ++i) dt.push_back(pairs[i].t - pairs[i - 1].t);
  const double med = detail::median_of(std::move(dt));
  const auto d = static_cast<std::size_t>(std::max(1.0, std::round(1.0 / med)));
  return std::min(d, pairs.size() - 1);
}

/// rms: sqrt(Σe²/n). paper_eq2: sqrt(Σe²)/n, the 1/n placed outside the root.
inline double aggregate(const ErrorSeries& s, Aggregation mode) {
  if (s.empty()) throw std::invalid_argument("cannot aggregate an empty series");
  double sum = 0.0;
  for (double v : s.value) sum += v * v;
  const auto n = static_cast<double>(s.size());
  return mode == Aggregation::rms ? std::sqrt(sum / n) : std::sqrt(sum) / n;
}

struct SeriesStats {
  double mean = 0.0;
  double median = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
};

inline SeriesStats series_stats(const ErrorSeries& s) {
  if (s.empty()) return {};
  SeriesStats st;
  const auto n = static_cast<double>(s.size());
  st.mean = std::accumulate(s.value.begin(), s.value.end(), 0.0) / n;
  double var = 0.0;
  for (double v : s.value) var += (v - st.mean) * (v - st.mean);
  st.stddev = std::sqrt(var / n);
  st.median = detail::median_of(s.value);
  const auto [lo, hi] = std::minmax_element(s.value.begin(), s.value.end());
  st.min = *lo;
  st.max = *hi;
  return st;
}

// ---------------------------------------------------------------------------
// Velocities

struct VelocityDerivation {
  std::vector<VelocitySample> samples;
  std::vector<std::string> warnings;
};

/// Central finite differences (one-sided at the ends) for world-frame linear
/// velocity and body-frame angular velocity, followed by a centered moving
/// average over 2·halfwidth+1 samples (truncated at the ends).
inline VelocityDerivation derive_velocities(const Trajectory& traj, std::size_t smoothing_halfwidth = 0) {
  const std::size_t n = traj.size();
  if (n < 3) throw std::invalid_argument("velocity derivation needs at least 3 samples");

  VelocityDerivation out;
  std::vector<double> dt(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) dt[i] = traj[i + 1].t - traj[i].t;
  const double med = detail::median_of(dt);
  const double max_dt = *std::max_element(dt.begin(), dt.end());
  if (max_dt > 10.0 * med) {
    out.warnings.push_back("non-uniform sampling: max dt " + detail::fmt_double(max_dt) + " s exceeds 10x median dt " +
                           detail::fmt_double(med) + " s");
  }

  // body-frame rotation increments between consecutive samples
  std::vector<Vec3> dphi(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    dphi[i] = (traj[i].pose.rotation().inverse() * traj[i + 1].pose.rotation()).log();
  }

  std::vector<Vec3> v(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    const double span = traj[hi].t - traj[lo].t;
    v[i] = (traj[hi].pose.translation() - traj[lo].pose.translation()) / span;
    Vec3 rot = Vec3::Zero();
    for (std::size_t k = lo; k < hi; ++k) rot += dphi[k];
    w[i] = rot / span;
  }

  out.samples.resize(n);
  const std::size_t h = smoothing_halfwidth;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= h ? i - h : 0;
    const std::size_t hi = std::min(n - 1, i + h);
    Vec3 sv = Vec3::Zero(), sw = Vec3::Zero();
    for (std::size_t k = lo; k <= hi; ++k) {
      sv += v[k];
      sw += w[k];
    }
    const auto cnt = static_cast<double>(hi - lo + 1);
    out.samples[i] = {traj[i].t, sv / cnt, Vec3(sw / cnt)};
  }
  return out;
}

/// Linear interpolation of a velocity series at `times`; times outside the
/// series span take the nearest endpoint value.
inline std::vector<VelocitySample> interpolate_velocities(std::span<const VelocitySample> vel, std::span<const double> times) {
  if (vel.empty()) throw std::invalid_argument("cannot interpolate an empty velocity series");
  std::vector<VelocitySample> out;
  out.reserve(times.size());
  for (double t : times) {
    const auto hi = std::lower_bound(vel.begin(), vel.end(), t, [](const VelocitySample& s, double x) { return s.t < x; });
    if (hi == vel.end()) {
      out.push_back(vel.back());
    } else if (hi == vel.begin() || hi->t == t) {
      out.push_back(*hi);
    } else {
      const auto& lo = *(hi - 1);
      const double a = (t - lo.t) / (hi->t - lo.t);
      VelocitySample s;
      s.v = (1.0 - a) * lo.v + a * hi->v;
      if (lo.omega && hi->omega) s.omega = Vec3((1.0 - a) * *lo.omega + a * *hi->omega);
      out.push_back(s);
    }
    out.back().t = t;
  }
  return out;
}

struct VelocityErrors {
  ErrorSeries ave;
  ErrorSeries rve;
  /// indices into the input series that produced the RVE entries
  std::vector<std::size_t> kept;
  std::size_t excluded = 0;
};

/// AVE for every sample; RVE only where ‖v_gt‖ ≥ speed_floor.
inline VelocityErrors rve_series(std::span<const VelocitySample> v_gt, std::span<const VelocitySample> v_est,
                                 double speed_floor) {
  if (v_gt.empty() || v_est.empty()) throw NoOverlapError("no velocity samples to compare");
  if (v_gt.size() != v_est.size()) throw std::invalid_argument("velocity series are not associated (length mismatch)");
  VelocityErrors r;
  r.ave.kind = ErrorKind::ave;
  r.rve.kind = ErrorKind::rve;
  for (std::size_t i = 0; i < v_gt.size(); ++i) {
    const double ave = (v_gt[i].v - v_est[i].v).norm();
    r.ave.t.push_back(v_gt[i].t);
    r.ave.value.push_back(ave);
    const double speed = v_gt[i].v.norm();
    if (speed >= speed_floor && speed > 0.0) {
      r.rve.t.push_back(v_gt[i].t);
      r.rve.value.push_back(ave / speed);
      r.kept.push_back(i);
    } else {
      ++r.excluded;
    }
  }
  return r;
}

/// Normalized per-sample weights: uniform 1/n, ‖v‖ (velocity), or √(‖v‖²+‖ω‖²) (combined).
inline std::vector<double> weights(std::span<const VelocitySample> v_gt, WeightScheme scheme) {
  if (v_gt.empty()) throw std::invalid_argument("weights need at least one sample");
  const std::size_t n = v_gt.size();
  if (scheme == WeightScheme::uniform) return std::vector<double>(n, 1.0 / static_cast<double>(n));

  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (scheme == WeightScheme::velocity) {
      w[i] = v_gt[i].v.norm();
    } else {
      if (!v_gt[i].omega) throw std::invalid_argument("combined weights need angular velocity");
      w[i] = std::sqrt(v_gt[i].v.squaredNorm() + v_gt[i].omega->squaredNorm());
    }
  }
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(sum > 0.0)) throw std::invalid_argument("all motion magnitudes are zero; weights undefined");
  for (double& x : w) x /= sum;
  return w;
}

struct PrecisionCurve {
  std::vector<double> xi;
  std::vector<double> s;
  WeightScheme weighting = WeightScheme::uniform;
};

/// `points` thresholds uniformly spaced on [0, xi_max].
inline std::vector<double> make_xi_grid(double xi_max = 1.0, std::size_t points = 256) {
  if (!(xi_max > 0.0) || points < 2) throw std::invalid_argument("xi grid needs xi_max > 0 and at least 2 points");
  std::vector<double> g(points);
  for (std::size_t k = 0; k < points; ++k) g[k] = xi_max * static_cast<double>(k) / static_cast<double>(points - 1);
  g.back() = xi_max;
  return g;
}

/// S(ξ) = Σ w_i·1(RVE_i < ξ) at every grid threshold. S is exactly 0 when no
/// sample passes and exactly 1 when all do.
inline PrecisionCurve precision_curve(const ErrorSeries& rve, std::span<const double> w, std::span<const double> xi_grid,
                                      WeightScheme label = WeightScheme::uniform) {
  if (rve.size() != w.size()) throw std::invalid_argument("RVE and weight lengths differ");
  if (!std::is_sorted(xi_grid.begin(), xi_grid.end())) throw std::invalid_argument("xi grid must be ascending");
  const std::size_t n = rve.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rve.value[a] < rve.value[b]; });
  std::vector<double> sorted(n), prefix(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    sorted[k] = rve.value[order[k]];
    prefix[k + 1] = prefix[k] + w[order[k]];
  }

  PrecisionCurve c;
  c.weighting = label;
  c.xi.assign(xi_grid.begin(), xi_grid.end());
  c.s.reserve(xi_grid.size());
  for (double xi : xi_grid) {
    const auto k = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), xi) - sorted.begin());
    c.s.push_back(k == 0 ? 0.0 : k == n ? 1.0 : std::min(1.0, prefix[k]));
  }
  return c;
}

namespace detail {

// Trapezoidal integral of the piecewise-linear (x, y) over [a, b] ⊆ [x.front(), x.back()].
inline double trapezoid(std::span<const double> x, std::span<const double> y, double a, double b) {
  auto at = [&](double q) {
    const auto hi = static_cast<std::size_t>(std::lower_bound(x.begin(), x.end(), q) - x.begin());
    if (hi < x.size() && x[hi] == q) return y[hi];
    const std::size_t lo = hi - 1;
    const double alpha = (q - x[lo]) / (x[hi] - x[lo]);
    return (1.0 - alpha) * y[lo] + alpha * y[hi];
  };
  double area = 0.0;
  double px = a, py = at(a);
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] <= a) continue;
    if (x[k] >= b) break;
    area += 0.5 * (py + y[k]) * (x[k] - px);
    px = x[k];
    py = y[k];
  }
  area += 0.5 * (py + at(b)) * (b - px);
  return area;
}

}  // namespace detail

/// Trapezoidal area under S over [0, xi_max], divided by xi_max.
inline double curve_auc(const PrecisionCurve& c, double xi_max) {
  if (c.xi.size() < 2 || c.xi.size() != c.s.size()) throw std::invalid_argument("curve needs at least 2 grid points");
  if (!(xi_max > 0.0) || c.xi.front() > 0.0 || xi_max > c.xi.back()) {
    throw std::invalid_argument("xi_max outside the curve's grid span");
  }
  return detail::trapezoid(c.xi, c.s, 0.0, xi_max) / xi_max;
}

}  // namespace evbench
