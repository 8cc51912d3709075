#pragma once

// Dataset-quality diagnostics: stereo event-count consistency, time maps,
// optical-flow difficulty, the stereo depth-reliability bound, and windowed
// event counts.

#include "evbench/ingest.hpp"
#include "evbench/metrics.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

namespace evbench {

/// Left/right difference above which a stereo pair is flagged.
inline constexpr double kStereoConsistencyPercent = 10.0;

struct StereoCountReport {
  double left_count = 0.0;
  double right_count = 0.0;
  double ratio_percent = 0.0;  // 100·(left − right)/right
  bool inconsistent = false;
};

inline StereoCountReport stereo_count_ratio(double left, double right,
                                            double threshold_percent = kStereoConsistencyPercent) {
  if (!(right > 0.0)) throw std::invalid_argument("right event count must be positive");
  if (!(left >= 0.0)) throw std::invalid_argument("left event count must be non-negative");
  StereoCountReport r{left, right, 100.0 * (left - right) / right, false};
  r.inconsistent = std::abs(r.ratio_percent) > threshold_percent;
  return r;
}

inline StereoCountReport stereo_count_ratio(const EventStream& left, const EventStream& right,
                                            double threshold_percent = kStereoConsistencyPercent) {
  return stereo_count_ratio(static_cast<double>(left.events.size()), static_cast<double>(right.events.size()),
                            threshold_percent);
}

// ---------------------------------------------------------------------------
// Time maps

inline double event_seconds(const Event& e) { return static_cast<double>(e.t) / 1e6; }

/// Per-pixel latest event time (seconds) inside a window [t0, t1).
class TimeMap {
 public:
  static constexpr double kBackground = -std::numeric_limits<double>::infinity();

  TimeMap(int width, int height, double t0, double t1)
      : width_(width), height_(height), t0_(t0), t1_(t1),
        cells_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), kBackground) {}

  int width() const { return width_; }
  int height() const { return height_; }
  double t0() const { return t0_; }
  double t1() const { return t1_; }
  double at(int x, int y) const { return cells_[index(x, y)]; }
  bool is_background(int x, int y) const { return at(x, y) == kBackground; }
  const std::vector<double>& cells() const { return cells_; }
  std::size_t active_pixels() const {
    return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(), [](double v) { return v != kBackground; }));
  }

  void update(int x, int y, double t) {
    double& c = cells_[index(x, y)];
    c = std::max(c, t);
  }
  void merge(const TimeMap& o) {
    for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] = std::max(cells_[i], o.cells_[i]);
  }

  /// Window-normalized value in [0, 1]; 0 for background.
  double normalized(int x, int y) const {
    const double v = at(x, y);
    return v == kBackground ? 0.0 : (v - t0_) / (t1_ - t0_);
  }

  /// exp(−(t1 − t)/tau) rendering; 0 for background.
  double decayed(int x, int y, double tau) const {
    const double v = at(x, y);
    return v == kBackground ? 0.0 : std::exp(-(t1_ - v) / tau);
  }

  /// Binary PGM; background 0, events 1..maxval (16-bit when `sixteen_bit`).
  /// `decay_tau` > 0 selects exponential-decay rendering instead of linear.
  void write_pgm(std::ostream& out, bool sixteen_bit = true, double decay_tau = 0.0) const {
    const int maxval = sixteen_bit ? 65535 : 255;
    out << "P5\n" << width_ << ' ' << height_ << '\n' << maxval << '\n';
    for (int y = 0; y < height_; ++y) {
      for (int x = 0; x < width_; ++x) {
        unsigned v = 0;
        if (!is_background(x, y)) {
          const double s = decay_tau > 0.0 ? decayed(x, y, decay_tau) : normalized(x, y);
          v = 1 + static_cast<unsigned>(std::lround(std::clamp(s, 0.0, 1.0) * (maxval - 1)));
        }
        if (sixteen_bit) out.put(static_cast<char>(v >> 8));
        out.put(static_cast<char>(v & 0xff));
      }
    }
  }

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  double t0_;
  double t1_;
  std::vector<double> cells_;
};

/// Chunked scans with `threads` > 1 reduce per-pixel maxima, so the result is
/// identical to the sequential scan.
inline TimeMap time_map(const EventStream& stream, double t0, double t1, unsigned threads = 1) {
  if (!(t0 < t1)) throw std::invalid_argument("time map window needs t0 < t1");
  TimeMap map(stream.width, stream.height, t0, t1);
  const auto& ev = stream.events;
  auto scan = [&](TimeMap& m, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const double t = event_seconds(ev[i]);
      if (t >= t0 && t < t1) m.update(ev[i].x, ev[i].y, t);
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1 || ev.size() < 2 * threads) {
    scan(map, 0, ev.size());
    return map;
  }
  std::vector<TimeMap> partial(threads, map);
  std::vector<std::thread> workers;
  const std::size_t chunk = (ev.size() + threads - 1) / threads;
  for (unsigned k = 0; k < threads; ++k) {
    const std::size_t lo = std::min(ev.size(), k * chunk), hi = std::min(ev.size(), lo + chunk);
    workers.emplace_back([&, k, lo, hi] { scan(partial[k], lo, hi); });
  }
  for (auto& w : workers) w.join();
  for (const auto& p : partial) map.merge(p);
  return map;
}

// ---------------------------------------------------------------------------
// Optical-flow difficulty

struct FlowDifficulty {
  std::vector<double> normalized;  // |f| / image diagonal
  std::vector<double> xi;
  std::vector<double> survival;  // P(normalized > ξ)
  double auc = 0.0;
};

/// Survival curve of diagonal-normalized flow magnitudes; AUC is its
/// trapezoidal area over the grid divided by the grid span.
inline FlowDifficulty flow_difficulty(std::span<const double> magnitudes, int width, int height,
                                      std::span<const double> xi_grid) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("image size must be positive");
  if (magnitudes.empty()) throw std::invalid_argument("empty flow input");
  if (xi_grid.size() < 2 || !std::is_sorted(xi_grid.begin(), xi_grid.end()) || !(xi_grid.back() > xi_grid.front())) {
    throw std::invalid_argument("xi grid must be ascending with at least 2 distinct points");
  }
  const double diag = std::hypot(static_cast<double>(width), static_cast<double>(height));
  FlowDifficulty f;
  f.normalized.reserve(magnitudes.size());
  for (double m : magnitudes) {
    if (!(m >= 0.0)) throw std::invalid_argument("flow magnitudes must be non-negative");
    f.normalized.push_back(m / diag);
  }
  std::vector<double> sorted = f.normalized;
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  f.xi.assign(xi_grid.begin(), xi_grid.end());
  for (double xi : xi_grid) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), xi);
    f.survival.push_back(static_cast<double>(above) / n);
  }
  f.auc = detail::trapezoid(f.xi, f.survival, f.xi.front(), f.xi.back()) / (f.xi.back() - f.xi.front());
  return f;
}

inline FlowDifficulty flow_difficulty(std::span<const Eigen::Vector2d> flow, int width, int height,
                                      std::span<const double> xi_grid) {
  std::vector<double> mags;
  mags.reserve(flow.size());
  for (const auto& f : flow) mags.push_back(f.norm());
  return flow_difficulty(mags, width, height, xi_grid);
}

// ---------------------------------------------------------------------------
// Stereo depth reliability

/// Relative depth error |D − D̂|/D when the disparity d is measured as d + du
/// (du may be negative): |du| / |d + du|.
inline double relative_depth_error(double disparity, double du) { return std::abs(du) / std::abs(disparity + du); }

/// Smallest disparity whose worst-case (under-measured) relative depth error is eps.
inline double min_reliable_disparity(double eps, double du) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  if (!(du > 0.0)) throw std::invalid_argument("disparity error must be positive");
  return du * (1.0 + eps) / eps;
}

/// Largest depth f_x·B/d_min whose relative error stays within eps.
inline double max_reliable_depth(double fx, double baseline, double eps, double du) {
  if (!(fx > 0.0) || !(baseline > 0.0)) throw std::invalid_argument("focal length and baseline must be positive");
  return fx * baseline / min_reliable_disparity(eps, du);
}

// ---------------------------------------------------------------------------
// Windowed counts

struct WindowedCounts {
  std::int64_t start_us = 0;
  std::int64_t window_us = 0;
  std::vector<std::uint64_t> counts;
  /// the last window extends beyond the counted span
  bool last_partial = false;
};

/// Counts per consecutive window [start + k·W, start + (k+1)·W) over the span
/// [begin_us, end_us); defaults to [first event, last event + 1 µs).
inline WindowedCounts windowed_event_counts(const EventStream& stream, double window_s,
                                            std::optional<std::pair<std::int64_t, std::int64_t>> span = {}) {
  if (!(window_s > 0.0)) throw std::invalid_argument("window must be positive");
  WindowedCounts r;
  r.window_us = std::max<std::int64_t>(1, std::llround(window_s * 1e6));
  const auto& ev = stream.events;
  if (!span) {
    if (ev.empty()) return r;
    span = {ev.front().t, ev.back().t + 1};
  }
  const auto [begin, end] = *span;
  if (!(end > begin)) throw std::invalid_argument("count span must be non-empty");
  r.start_us = begin;
  const std::int64_t len = end - begin;
  r.counts.assign(static_cast<std::size_t>((len + r.window_us - 1) / r.window_us), 0);
  r.last_partial = len % r.window_us != 0;
  for (const auto& e : ev) {
    if (e.t < begin || e.t >= end) continue;
    ++r.counts[static_cast<std::size_t>((e.t - begin) / r.window_us)];
  }
  return r;
}

}  // namespace evbench
