#pragma once

// Trajectory, velocity and event-stream readers/writers, plus the
// marker-based mapping of device clocks onto the common timeline.
//
// Formats:
//   trajectory  TUM text, "t tx ty tz qx qy qz qw", '#' starts a comment line
//   velocity    text, "t vx vy vz [wx wy wz]", '#' starts a comment line
//   events csv  "t_us,x,y,polarity", optional header line, polarity 1/-1 (0 reads as -1)
//   events evb  "EVB1", u16 width, u16 height, then 13-byte little-endian records
//               {u64 t_us, u16 x, u16 y, i8 polarity}

#include "evbench/error.hpp"
#include "evbench/geometry.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <utility>
#include <vector>

namespace evbench {

struct TrajectorySample {
  double t = 0.0;  // seconds
  Pose pose;
};

/// Timestamped poses with strictly increasing timestamps.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::vector<TrajectorySample> samples) : samples_(std::move(samples)) {
    for (std::size_t i = 1; i < samples_.size(); ++i) {
      if (!(samples_[i].t > samples_[i - 1].t)) {
        throw RangeError("trajectory timestamps not strictly increasing at index " + std::to_string(i));
      }
    }
  }

  const std::vector<TrajectorySample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const TrajectorySample& operator[](std::size_t i) const { return samples_[i]; }
  auto begin() const { return samples_.begin(); }
  auto end() const { return samples_.end(); }
  double start_time() const { return samples_.front().t; }
  double end_time() const { return samples_.back().t; }

  friend bool operator==(const Trajectory& a, const Trajectory& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].t != b[i].t || !(a[i].pose == b[i].pose)) return false;
    }
    return true;
  }

 private:
  std::vector<TrajectorySample> samples_;
};

/// Linear velocity (world frame, m/s) and optional angular velocity (body frame, rad/s).
struct VelocitySample {
  double t = 0.0;
  Vec3 v = Vec3::Zero();
  std::optional<Vec3> omega;
};

struct Event {
  std::int64_t t = 0;  // microseconds
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  std::int8_t polarity = 1;  // +1 or -1

  friend bool operator==(const Event&, const Event&) = default;
};

struct EventStream {
  int width = 0;
  int height = 0;
  std::string camera_id;
  std::vector<Event> events;

  friend bool operator==(const EventStream&, const EventStream&) = default;
};

struct SyncMarker {
  std::int64_t pulse_index = 0;
  std::int64_t device_t = 0;  // microseconds
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t j = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > j) out.push_back(line.substr(j, i - j));
  }
  return out;
}

inline std::vector<std::string_view> split_char(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    std::string_view field = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) field.remove_suffix(1);
    out.push_back(field);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T value{};
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) return std::nullopt;
  }
  return value;
}

inline double field_double(std::string_view s, std::size_t line, const char* name) {
  auto v = parse_number<double>(s);
  if (!v) throw ParseError(std::string("invalid ") + name + " '" + std::string(s) + "'", line);
  return *v;
}

inline std::int64_t field_int(std::string_view s, std::size_t line, const char* name) {
  auto v = parse_number<std::int64_t>(s);
  if (!v) throw ParseError(std::string("invalid ") + name + " '" + std::string(s) + "'", line);
  return *v;
}

/// Shortest round-trip decimal representation.
inline std::string fmt_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

inline bool is_comment_or_blank(std::string_view line) {
  for (char c : line) {
    if (c == '#') return true;
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

inline std::ifstream open_input(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw std::filesystem::filesystem_error("cannot open", path, std::make_error_code(std::errc::no_such_file_or_directory));
  return in;
}

inline std::ofstream open_output(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw std::filesystem::filesystem_error("cannot write", path, std::make_error_code(std::errc::permission_denied));
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Trajectories

inline Trajectory parse_trajectory(std::istream& in) {
  std::vector<TrajectorySample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_comment_or_blank(line)) continue;
    const auto f = detail::split_ws(line);
    if (f.size() != 8) {
      throw ParseError("expected 8 fields 't tx ty tz qx qy qz qw', got " + std::to_string(f.size()), line_no);
    }
    std::array<double, 8> v{};
    static constexpr std::array<const char*, 8> names{"t", "tx", "ty", "tz", "qx", "qy", "qz", "qw"};
    for (std::size_t k = 0; k < 8; ++k) v[k] = detail::field_double(f[k], line_no, names[k]);

    const Eigen::Quaterniond q(v[7], v[4], v[5], v[6]);
    if (std::abs(q.norm() - 1.0) > 1e-3) {
      throw ParseError("quaternion norm " + detail::fmt_double(q.norm()) + " is not unit", line_no);
    }
    if (!samples.empty()) {
      if (v[0] == samples.back().t) throw ParseError("duplicate timestamp " + std::string(f[0]), line_no);
      if (v[0] < samples.back().t) throw ParseError("timestamps not increasing", line_no);
    }
    samples.push_back({v[0], Pose(Rotation(q), Vec3(v[1], v[2], v[3]))});
  }
  return Trajectory(std::move(samples));
}

inline Trajectory load_trajectory(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  return parse_trajectory(in);
}

inline void write_trajectory(std::ostream& out, const Trajectory& traj) {
  using detail::fmt_double;
  out << "# t tx ty tz qx qy qz qw\n";
  for (const auto& s : traj) {
    const auto& p = s.pose.translation();
    const auto& q = s.pose.rotation();
    out << fmt_double(s.t) << ' ' << fmt_double(p.x()) << ' ' << fmt_double(p.y()) << ' ' << fmt_double(p.z())
        << ' ' << fmt_double(q.x()) << ' ' << fmt_double(q.y()) << ' ' << fmt_double(q.z()) << ' '
        << fmt_double(q.w()) << '\n';
  }
}

inline void save_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
  auto out = detail::open_output(path);
  write_trajectory(out, traj);
}

// ---------------------------------------------------------------------------
// Velocities

inline std::vector<VelocitySample> parse_velocities(std::istream& in) {
  std::vector<VelocitySample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_comment_or_blank(line)) continue;
    const auto f = detail::split_ws(line);
    if (f.size() != 4 && f.size() != 7) {
      throw ParseError("expected 't vx vy vz [wx wy wz]', got " + std::to_string(f.size()) + " fields", line_no);
    }
    VelocitySample s;
    s.t = detail::field_double(f[0], line_no, "t");
    for (int k = 0; k < 3; ++k) s.v[k] = detail::field_double(f[1 + k], line_no, "velocity");
    if (f.size() == 7) {
      Vec3 w;
      for (int k = 0; k < 3; ++k) w[k] = detail::field_double(f[4 + k], line_no, "angular velocity");
      s.omega = w;
    }
    if (!out.empty() && !(s.t > out.back().t)) throw ParseError("timestamps not strictly increasing", line_no);
    out.push_back(s);
  }
  return out;
}

inline std::vector<VelocitySample> load_velocities(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  return parse_velocities(in);
}

inline void write_velocities(std::ostream& out, std::span<const VelocitySample> vel) {
  using detail::fmt_double;
  out << "# t vx vy vz [wx wy wz]\n";
  for (const auto& s : vel) {
    out << fmt_double(s.t) << ' ' << fmt_double(s.v.x()) << ' ' << fmt_double(s.v.y()) << ' ' << fmt_double(s.v.z());
    if (s.omega) {
      out << ' ' << fmt_double(s.omega->x()) << ' ' << fmt_double(s.omega->y()) << ' ' << fmt_double(s.omega->z());
    }
    out << '\n';
  }
}

inline void save_velocities(const std::filesystem::path& path, std::span<const VelocitySample> vel) {
  auto out = detail::open_output(path);
  write_velocities(out, vel);
}

// ---------------------------------------------------------------------------
// Events

namespace detail {

inline void check_event(const EventStream& s, const Event& e, std::size_t index) {
  if (e.x >= s.width || e.y >= s.height) {
    throw RangeError("event " + std::to_string(index) + " at (" + std::to_string(e.x) + "," + std::to_string(e.y) +
                     ") outside " + std::to_string(s.width) + "x" + std::to_string(s.height));
  }
  if (!s.events.empty() && e.t < s.events.back().t) {
    throw RangeError("event " + std::to_string(index) + " timestamp decreases");
  }
}

inline void check_resolution(int width, int height) {
  if (width <= 0 || height <= 0 || width > 65535 || height > 65535) {
    throw std::invalid_argument("invalid sensor resolution");
  }
}

}  // namespace detail

inline EventStream parse_events_csv(std::istream& in, int width, int height, std::string camera_id = {}) {
  detail::check_resolution(width, height);
  EventStream s{width, height, std::move(camera_id), {}};
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_comment_or_blank(line)) continue;
    if (first_content) {
      first_content = false;
      if (std::any_of(line.begin(), line.end(), [](unsigned char c) { return std::isalpha(c); })) continue;
    }
    const auto f = detail::split_char(line, ',');
    if (f.size() != 4) throw ParseError("expected 't_us,x,y,polarity', got " + std::to_string(f.size()) + " fields", line_no);
    const std::int64_t t = detail::field_int(f[0], line_no, "timestamp");
    const std::int64_t x = detail::field_int(f[1], line_no, "x");
    const std::int64_t y = detail::field_int(f[2], line_no, "y");
    const std::int64_t p = detail::field_int(f[3], line_no, "polarity");
    if (t < 0) throw ParseError("negative timestamp", line_no);
    if (p != 1 && p != -1 && p != 0) throw ParseError("polarity must be 1, -1 or 0", line_no);
    if (x < 0 || y < 0 || x >= width || y >= height) {
      throw RangeError("line " + std::to_string(line_no) + ": coordinate (" + std::to_string(x) + "," +
                       std::to_string(y) + ") outside " + std::to_string(width) + "x" + std::to_string(height));
    }
    const Event e{t, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                  static_cast<std::int8_t>(p == 0 ? -1 : p)};
    if (!s.events.empty() && e.t < s.events.back().t) {
      throw RangeError("line " + std::to_string(line_no) + ": timestamp decreases");
    }
    s.events.push_back(e);
  }
  return s;
}

inline void write_events_csv(std::ostream& out, const EventStream& s) {
  out << "t_us,x,y,polarity\n";
  for (const auto& e : s.events) {
    out << e.t << ',' << e.x << ',' << e.y << ',' << static_cast<int>(e.polarity) << '\n';
  }
}

inline constexpr std::size_t kEventRecordBytes = 13;
inline constexpr std::string_view kEventMagic = "EVB1";

/// Little-endian record codec for the packed-binary event format.
inline void encode_event(const Event& e, std::span<unsigned char, kEventRecordBytes> out) {
  const auto t = static_cast<std::uint64_t>(e.t);
  for (int k = 0; k < 8; ++k) out[k] = static_cast<unsigned char>(t >> (8 * k));
  out[8] = static_cast<unsigned char>(e.x & 0xff);
  out[9] = static_cast<unsigned char>(e.x >> 8);
  out[10] = static_cast<unsigned char>(e.y & 0xff);
  out[11] = static_cast<unsigned char>(e.y >> 8);
  out[12] = static_cast<unsigned char>(e.polarity);
}

inline Event decode_event(std::span<const unsigned char, kEventRecordBytes> in) {
  std::uint64_t t = 0;
  for (int k = 0; k < 8; ++k) t |= static_cast<std::uint64_t>(in[k]) << (8 * k);
  if (t > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    throw ParseError("timestamp out of range", 0);
  }
  Event e;
  e.t = static_cast<std::int64_t>(t);
  e.x = static_cast<std::uint16_t>(in[8] | (in[9] << 8));
  e.y = static_cast<std::uint16_t>(in[10] | (in[11] << 8));
  e.polarity = static_cast<std::int8_t>(in[12]);
  return e;
}

struct EventHeader {
  int width = 0;
  int height = 0;
};

inline EventHeader read_event_header(std::istream& in) {
  std::array<unsigned char, 8> h{};
  if (!in.read(reinterpret_cast<char*>(h.data()), h.size())) throw ParseError("truncated event header", 0);
  if (std::string_view(reinterpret_cast<const char*>(h.data()), 4) != kEventMagic) {
    throw ParseError("bad magic, expected EVB1", 0);
  }
  EventHeader hdr{h[4] | (h[5] << 8), h[6] | (h[7] << 8)};
  detail::check_resolution(hdr.width, hdr.height);
  return hdr;
}

inline void write_event_header(std::ostream& out, int width, int height) {
  detail::check_resolution(width, height);
  const std::array<unsigned char, 8> h{'E', 'V', 'B', '1',
                                       static_cast<unsigned char>(width & 0xff), static_cast<unsigned char>(width >> 8),
                                       static_cast<unsigned char>(height & 0xff), static_cast<unsigned char>(height >> 8)};
  out.write(reinterpret_cast<const char*>(h.data()), h.size());
}

/// Reads up to `max_events` records; returns fewer only at end of input.
/// A partial trailing record is an error.
inline std::vector<Event> read_event_records(std::istream& in, std::size_t max_events) {
  std::vector<Event> out;
  std::array<unsigned char, kEventRecordBytes> rec{};
  while (out.size() < max_events) {
    in.read(reinterpret_cast<char*>(rec.data()), rec.size());
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got == 0) break;
    if (got != rec.size()) throw ParseError("truncated event record", 0);
    out.push_back(decode_event(rec));
  }
  return out;
}

inline EventStream parse_events_binary(std::istream& in, std::string camera_id = {}) {
  const EventHeader hdr = read_event_header(in);
  EventStream s{hdr.width, hdr.height, std::move(camera_id), {}};
  std::size_t index = 0;
  for (const Event& e : read_event_records(in, std::numeric_limits<std::size_t>::max())) {
    if (e.polarity != 1 && e.polarity != -1) throw ParseError("record " + std::to_string(index) + ": bad polarity", 0);
    detail::check_event(s, e, index++);
    s.events.push_back(e);
  }
  return s;
}

inline void write_events_binary(std::ostream& out, const EventStream& s) {
  write_event_header(out, s.width, s.height);
  std::array<unsigned char, kEventRecordBytes> rec{};
  for (const auto& e : s.events) {
    encode_event(e, rec);
    out.write(reinterpret_cast<const char*>(rec.data()), rec.size());
  }
}

/// Reads a packed-binary file (detected by magic) or a csv file; csv requires the resolution.
inline EventStream load_events(const std::filesystem::path& path, std::optional<std::pair<int, int>> resolution = {},
                               std::string camera_id = {}) {
  auto in = detail::open_input(path, std::ios::in | std::ios::binary);
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  const bool binary = in.gcount() == 4 && std::string_view(magic.data(), 4) == kEventMagic;
  in.clear();
  in.seekg(0);
  if (camera_id.empty()) camera_id = path.stem().string();
  if (binary) return parse_events_binary(in, std::move(camera_id));
  if (!resolution) throw std::invalid_argument("csv event file " + path.string() + " needs --width/--height");
  return parse_events_csv(in, resolution->first, resolution->second, std::move(camera_id));
}

inline void save_events(const std::filesystem::path& path, const EventStream& s) {
  if (path.extension() == ".csv") {
    auto out = detail::open_output(path);
    write_events_csv(out, s);
  } else {
    auto out = detail::open_output(path, std::ios::out | std::ios::binary);
    write_events_binary(out, s);
  }
}

// ---------------------------------------------------------------------------
// Clock mapping

/// Piecewise-linear device clock (µs) -> common timeline (s), exact at anchors,
/// extrapolated from the nearest segment outside them.
class ClockMap {
 public:
  struct Anchor {
    double device_us;
    double common_s;
  };

  explicit ClockMap(std::vector<Anchor> anchors) : anchors_(std::move(anchors)) {
    if (anchors_.size() < 2) throw std::invalid_argument("clock map needs at least 2 anchors");
    for (std::size_t i = 1; i < anchors_.size(); ++i) {
      if (!(anchors_[i].device_us > anchors_[i - 1].device_us) || !(anchors_[i].common_s > anchors_[i - 1].common_s)) {
        throw std::invalid_argument("clock map anchors not monotone");
      }
    }
  }

  /// device µs -> seconds, i.e. t_s = (device_us + offset_us) * 1e-6.
  static ClockMap offset(double offset_us) {
    return ClockMap({{0.0, offset_us * 1e-6}, {1e6, (1e6 + offset_us) * 1e-6}});
  }
  static ClockMap identity() { return offset(0.0); }

  const std::vector<Anchor>& anchors() const { return anchors_; }

  bool is_identity() const {
    return anchors_.size() == 2 && anchors_[0].device_us == 0.0 && anchors_[0].common_s == 0.0 &&
           anchors_[1].device_us == 1e6 && anchors_[1].common_s == 1.0;
  }

  double operator()(double device_us) const {
    const auto it = std::upper_bound(anchors_.begin(), anchors_.end(), device_us,
                                     [](double v, const Anchor& a) { return v < a.device_us; });
    std::size_t hi = static_cast<std::size_t>(it - anchors_.begin());
    if (hi > 0 && anchors_[hi - 1].device_us == device_us) return anchors_[hi - 1].common_s;
    hi = std::clamp<std::size_t>(hi, 1, anchors_.size() - 1);
    const Anchor& a = anchors_[hi - 1];
    const Anchor& b = anchors_[hi];
    const double alpha = (device_us - a.device_us) / (b.device_us - a.device_us);
    return a.common_s + alpha * (b.common_s - a.common_s);
  }

 private:
  std::vector<Anchor> anchors_;
};

/// Anchor k maps marker k's device time to host_t0 + pulse_index_k / pulse_hz.
inline ClockMap build_clock_map(std::span<const SyncMarker> markers, double pulse_hz, double host_t0) {
  if (markers.size() < 2) throw std::invalid_argument("at least 2 sync markers are required");
  if (!(pulse_hz > 0.0)) throw std::invalid_argument("pulse frequency must be positive");
  std::vector<ClockMap::Anchor> anchors;
  anchors.reserve(markers.size());
  for (std::size_t i = 0; i < markers.size(); ++i) {
    if (i > 0 && (markers[i].pulse_index <= markers[i - 1].pulse_index || markers[i].device_t <= markers[i - 1].device_t)) {
      throw std::invalid_argument("sync markers not monotone at index " + std::to_string(i));
    }
    anchors.push_back({static_cast<double>(markers[i].device_t),
                       host_t0 + static_cast<double>(markers[i].pulse_index) / pulse_hz});
  }
  return ClockMap(std::move(anchors));
}

/// Trajectory timestamps are read as device seconds (t·1e6 µs).
inline Trajectory apply_clock_map(const ClockMap& map, const Trajectory& traj) {
  if (map.is_identity()) return traj;
  std::vector<TrajectorySample> out;
  out.reserve(traj.size());
  for (const auto& s : traj) out.push_back({map(s.t * 1e6), s.pose});
  return Trajectory(std::move(out));
}

/// Event timestamps are mapped and rounded to the nearest common-timeline microsecond.
inline EventStream apply_clock_map(const ClockMap& map, const EventStream& stream) {
  EventStream out{stream.width, stream.height, stream.camera_id, {}};
  out.events.reserve(stream.events.size());
  for (Event e : stream.events) {
    e.t = std::llround(map(static_cast<double>(e.t)) * 1e6);
    out.events.push_back(e);
  }
  return out;
}

}  // namespace evbench
