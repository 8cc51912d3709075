#pragma once

// Live stereo focus assistant: per-camera sliding-window event rates, session
// peak tracking and an "in focus" advisory.
//
// Rates are counts over [t − window, t) divided by the window, with t on the
// event (device) timeline in microseconds. Each camera has its own lock, so the
// two ingestion producers never contend with each other; a snapshot takes
// both locks at once and therefore sees a consistent pair of windows.

#include "evbench/diagnostics.hpp"
#include "evbench/ingest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

namespace evbench::focus {

enum class Camera { left, right };

enum class StimulusKind { checkerboard_flicker, rotating_line };

inline std::string_view to_string(StimulusKind k) {
  return k == StimulusKind::checkerboard_flicker ? "checkerboard_flicker" : "rotating_line";
}

struct StimulusConfig {
  StimulusKind kind = StimulusKind::checkerboard_flicker;
  double frequency = 5.0;  // Hz for flicker, rad/s for rotation
  int grid_size = 8;
  double contrast = 1.0;
};

struct FocusConfig {
  double window_s = 0.1;
  double cadence_hz = 10.0;
  /// both rates must reach this fraction of their session peaks
  double peak_fraction = 0.9;
  /// and |ratio| must not exceed this many percent
  double ratio_tolerance_percent = kStereoConsistencyPercent;
  StimulusConfig stimulus;

  std::int64_t window_us() const { return std::max<std::int64_t>(1, std::llround(window_s * 1e6)); }
};

struct FocusSnapshot {
  double t = 0.0;  // seconds
  double left_rate = 0.0;
  double right_rate = 0.0;
  /// 100·(left − right)/right over the window counts; empty when the right count is 0
  std::optional<double> ratio_percent;
  double left_peak = 0.0;
  double right_peak = 0.0;
  double window = 0.1;
  bool in_focus = false;
  std::uint64_t left_count = 0;
  std::uint64_t right_count = 0;
};

/// The advisory predicate: both cameras active, near their peaks, and matched.
inline bool in_focus_predicate(double left_rate, double right_rate, double left_peak, double right_peak,
                               std::optional<double> ratio_percent, const FocusConfig& cfg) {
  if (!(left_rate > 0.0) || !(right_rate > 0.0) || !ratio_percent) return false;
  return left_rate >= cfg.peak_fraction * left_peak && right_rate >= cfg.peak_fraction * right_peak &&
         std::abs(*ratio_percent) <= cfg.ratio_tolerance_percent;
}

class FocusService {
 public:
  explicit FocusService(FocusConfig cfg = {}) : cfg_(std::move(cfg)) {
    if (!(cfg_.window_s > 0.0) || !(cfg_.cadence_hz > 0.0)) throw std::invalid_argument("window and cadence must be positive");
  }

  const FocusConfig& config() const { return cfg_; }

  /// Appends a batch for one camera. The batch must be non-decreasing in time
  /// and must not start before that camera's previous batch ended; otherwise it
  /// is rejected as a whole.
  std::size_t ingest_batch(Camera cam, std::span<const Event> events) {
    if (events.empty()) return 0;
    for (std::size_t i = 1; i < events.size(); ++i) {
      if (events[i].t < events[i - 1].t) throw RangeError("batch timestamps decrease at index " + std::to_string(i));
    }
    Channel& ch = channel(cam);
    std::lock_guard lock(ch.mutex);
    if (!ch.times.empty() && events.front().t < ch.times.back()) throw RangeError("batch starts before the previous one ended");
    for (const auto& e : events) ch.times.push_back(e.t);
    ch.latest = std::max(ch.latest, events.back().t);
    evict(ch, ch.latest + 1 - cfg_.window_us());
    return events.size();
  }

  /// Latest event time seen on either camera, µs.
  std::optional<std::int64_t> latest_event_time() const {
    std::scoped_lock lock(left_.mutex, right_.mutex);
    std::optional<std::int64_t> t;
    for (const Channel* ch : {&left_, &right_}) {
      if (ch->latest != kNone) t = std::max(t.value_or(ch->latest), ch->latest);
    }
    return t;
  }

  /// Rates over [t − window, t). Snapshot times must strictly increase.
  FocusSnapshot snapshot(std::int64_t t_us) {
    std::scoped_lock lock(left_.mutex, right_.mutex, peak_mutex_);
    if (last_snapshot_ && t_us <= *last_snapshot_) throw std::invalid_argument("snapshot times must strictly increase");
    last_snapshot_ = t_us;
    const std::int64_t from = t_us - cfg_.window_us();
    FocusSnapshot s;
    s.t = static_cast<double>(t_us) / 1e6;
    s.window = cfg_.window_s;
    s.left_count = count_in(left_, from, t_us);
    s.right_count = count_in(right_, from, t_us);
    s.left_rate = static_cast<double>(s.left_count) / cfg_.window_s;
    s.right_rate = static_cast<double>(s.right_count) / cfg_.window_s;
    if (s.right_count > 0) {
      s.ratio_percent = 100.0 * (static_cast<double>(s.left_count) - static_cast<double>(s.right_count)) /
                        static_cast<double>(s.right_count);
    } else if (s.left_count == 0) {
      s.ratio_percent = 0.0;
    }
    left_peak_ = std::max(left_peak_, s.left_rate);
    right_peak_ = std::max(right_peak_, s.right_rate);
    s.left_peak = left_peak_;
    s.right_peak = right_peak_;
    s.in_focus = in_focus_predicate(s.left_rate, s.right_rate, s.left_peak, s.right_peak, s.ratio_percent, cfg_);
    return s;
  }

  /// Snapshot at one microsecond past the latest event (or past the previous
  /// snapshot, whichever is later).
  FocusSnapshot snapshot() {
    std::int64_t t = latest_event_time().value_or(0) + 1;
    {
      std::lock_guard lock(peak_mutex_);
      if (last_snapshot_) t = std::max(t, *last_snapshot_ + 1);
    }
    return snapshot(t);
  }

  /// Peaks restart from the rates of the next snapshot.
  void reset_peaks() {
    std::lock_guard lock(peak_mutex_);
    left_peak_ = 0.0;
    right_peak_ = 0.0;
  }

 private:
  static constexpr std::int64_t kNone = std::numeric_limits<std::int64_t>::min();

  struct Channel {
    mutable std::mutex mutex;
    std::deque<std::int64_t> times;
    std::int64_t latest = kNone;
  };

  Channel& channel(Camera c) { return c == Camera::left ? left_ : right_; }

  static void evict(Channel& ch, std::int64_t keep_from) {
    while (!ch.times.empty() && ch.times.front() < keep_from) ch.times.pop_front();
  }

  static std::uint64_t count_in(const Channel& ch, std::int64_t from, std::int64_t to) {
    const auto lo = std::lower_bound(ch.times.begin(), ch.times.end(), from);
    const auto hi = std::lower_bound(lo, ch.times.end(), to);
    return static_cast<std::uint64_t>(hi - lo);
  }

  FocusConfig cfg_;
  Channel left_;
  Channel right_;
  std::mutex peak_mutex_;
  double left_peak_ = 0.0;
  double right_peak_ = 0.0;
  std::optional<std::int64_t> last_snapshot_;
};

// ---------------------------------------------------------------------------
// Replay

struct ReplayOptions {
  /// wall-clock pacing factor; 1 = real time, 0 = as fast as possible
  double speed = 0.0;
  std::function<bool()> stop = [] { return false; };
};

/// Replays two recorded streams through `service`: at every cadence tick
/// t_k = t_start + k/cadence (first tick one period after the first event) all
/// events with t < t_k are ingested, then a snapshot at t_k is passed to `sink`.
/// Stops after the tick that passes the last event.
inline std::size_t replay(FocusService& service, const EventStream& left, const EventStream& right,
                          const std::function<void(const FocusSnapshot&)>& sink, const ReplayOptions& opt = {}) {
  const auto& l = left.events;
  const auto& r = right.events;
  if (l.empty() && r.empty()) return 0;
  std::int64_t start = std::numeric_limits<std::int64_t>::max(), last = std::numeric_limits<std::int64_t>::min();
  if (!l.empty()) start = std::min(start, l.front().t), last = std::max(last, l.back().t);
  if (!r.empty()) start = std::min(start, r.front().t), last = std::max(last, r.back().t);

  const double period_us = 1e6 / service.config().cadence_hz;
  const auto wall_start = std::chrono::steady_clock::now();
  std::size_t li = 0, ri = 0, ticks = 0;
  for (std::size_t k = 1;; ++k) {
    if (opt.stop()) break;
    const std::int64_t tick = start + std::llround(static_cast<double>(k) * period_us);
    const std::size_t lj = static_cast<std::size_t>(
        std::lower_bound(l.begin() + static_cast<std::ptrdiff_t>(li), l.end(), tick, [](const Event& e, std::int64_t t) { return e.t < t; }) - l.begin());
    const std::size_t rj = static_cast<std::size_t>(
        std::lower_bound(r.begin() + static_cast<std::ptrdiff_t>(ri), r.end(), tick, [](const Event& e, std::int64_t t) { return e.t < t; }) - r.begin());
    service.ingest_batch(Camera::left, std::span(l).subspan(li, lj - li));
    service.ingest_batch(Camera::right, std::span(r).subspan(ri, rj - ri));
    li = lj;
    ri = rj;
    if (opt.speed > 0.0) {
      const auto due = wall_start + std::chrono::microseconds(
                                        static_cast<std::int64_t>(static_cast<double>(tick - start) / opt.speed));
      std::this_thread::sleep_until(due);
    }
    sink(service.snapshot(tick));
    ++ticks;
    if (tick > last) break;
  }
  return ticks;
}

}  // namespace evbench::focus
