// evbench: trajectory/velocity evaluation, dataset diagnostics, fixture
// synthesis and the live stereo focus assistant.

#include "evbench/evbench.hpp"
#include "evbench/focus_server.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using evbench::json;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kMissingFile = 2, kNoOverlap = 3 };

std::atomic<bool> g_stop{false};
extern "C" void on_signal(int) { g_stop = true; }

void require_files(const std::vector<std::string>& paths) {
  for (const auto& p : paths) {
    if (!fs::exists(p)) {
      throw fs::filesystem_error("no such file", p, std::make_error_code(std::errc::no_such_file_or_directory));
    }
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::vector<std::string> gt, est, est_vel, names;
  std::string align = "se3", agg = "rms", weights = "velocity", assoc = "interpolate";
  double xi_max = 1.0;
  std::size_t xi_points = 256;
  double speed_floor = 0.05;
  std::optional<double> max_dt;
  std::optional<std::size_t> rpe_delta;
  std::size_t smoothing = 2;
  std::string out, svg;
  std::uint64_t seed = 0;
  unsigned jobs = 0;
};

int run_evaluate(const EvaluateArgs& a) {
  if (a.gt.size() != a.est.size()) throw CLI::ValidationError("--gt and --est must be given the same number of times");
  if (!a.est_vel.empty() && a.est_vel.size() != a.est.size()) {
    throw CLI::ValidationError("--est-vel must be given once per --est");
  }
  require_files(a.gt);
  require_files(a.est);
  require_files(a.est_vel);

  evbench::EvaluateConfig base;
  base.align = a.align == "sim3" ? evbench::AlignMode::sim3 : a.align == "none" ? evbench::AlignMode::none : evbench::AlignMode::se3;
  base.aggregation = a.agg == "paper-eq2" ? evbench::Aggregation::paper_eq2 : evbench::Aggregation::rms;
  base.weights = a.weights == "uniform"    ? evbench::WeightScheme::uniform
                 : a.weights == "combined" ? evbench::WeightScheme::combined
                                           : evbench::WeightScheme::velocity;
  base.association = a.assoc == "nearest" ? evbench::AssociationMode::nearest : evbench::AssociationMode::interpolate;
  base.xi_max = a.xi_max;
  base.xi_points = a.xi_points;
  base.speed_floor = a.speed_floor;
  base.max_dt = a.max_dt;
  base.rpe_delta = a.rpe_delta;
  base.smoothing_halfwidth = a.smoothing;

  const std::size_t n = a.gt.size();
  auto eval_one = [&](std::size_t i) {
    auto cfg = base;
    cfg.sequence_id = i < a.names.size() ? a.names[i] : fs::path(a.est[i]).stem().string();
    const auto gt = evbench::load_trajectory(a.gt[i]);
    const auto est = evbench::load_trajectory(a.est[i]);
    std::optional<std::vector<evbench::VelocitySample>> vel;
    if (!a.est_vel.empty()) vel = evbench::load_velocities(a.est_vel[i]);
    return evbench::to_json(evbench::evaluate_sequence(gt, est, cfg, vel));
  };

  // Worker pool over sequences; results are collected in input order.
  const unsigned jobs = a.jobs > 0 ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
  std::vector<json> results(n);
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> workers;
  for (unsigned w = 0; w < std::min<std::size_t>(jobs, n); ++w) {
    workers.push_back(std::async(std::launch::async, [&] {
      for (std::size_t i; (i = next++) < n;) results[i] = eval_one(i);
    }));
  }
  for (auto& w : workers) w.get();

  json report;
  report["schema"] = evbench::kReportSchema;
  report["command"] = "evaluate";
  report["config"] = {{"gt", a.gt},
                      {"est", a.est},
                      {"est_vel", a.est_vel},
                      {"names", a.names},
                      {"align", a.align},
                      {"agg", a.agg},
                      {"weights", a.weights},
                      {"assoc", a.assoc},
                      {"xi_max", a.xi_max},
                      {"xi_points", a.xi_points},
                      {"speed_floor", a.speed_floor},
                      {"max_dt", a.max_dt ? json(*a.max_dt) : json(nullptr)},
                      {"rpe_delta", a.rpe_delta ? json(*a.rpe_delta) : json(nullptr)},
                      {"smoothing_halfwidth", a.smoothing},
                      {"seed", a.seed},
                      {"svg", a.svg}};
  report["conventions"] = evbench::conventions_json();
  report["sequences"] = results;
  write_text(a.out, report.dump(2) + "\n");

  if (!a.svg.empty()) {
    fs::create_directories(a.svg);
    for (const auto& seq : results) {
      const auto id = seq.at("id").get<std::string>();
      write_text((fs::path(a.svg) / (id + "_precision.svg")).string(), evbench::precision_curves_svg(seq));
      write_text((fs::path(a.svg) / (id + "_errors.svg")).string(), evbench::error_trace_svg(seq));
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct DiagnoseArgs {
  std::string left, right;
  std::optional<double> left_count, right_count;
  int width = 0, height = 0;
  double window = 5.0;
  std::vector<double> time_map_window;
  std::string time_map_out;
  bool time_map_8bit = false;
  double decay_tau = 0.0;
  std::optional<double> fx;
  std::vector<double> baselines;
  double eps = 0.15, du = 0.5;
  unsigned threads = 1;
  std::string out;
};

json depth_table(double fx, const std::vector<double>& baselines, double eps, double du) {
  json rows = json::array();
  for (double b : baselines) {
    rows.push_back({{"fx", fx},
                    {"baseline", b},
                    {"eps", eps},
                    {"du", du},
                    {"min_disparity", evbench::min_reliable_disparity(eps, du)},
                    {"max_depth", evbench::max_reliable_depth(fx, b, eps, du)}});
  }
  return rows;
}

int run_diagnose(const DiagnoseArgs& a) {
  std::optional<std::pair<int, int>> res;
  if (a.width > 0 && a.height > 0) res = std::pair{a.width, a.height};
  std::vector<evbench::EventStream> streams;
  for (const auto& p : {a.left, a.right}) {
    if (p.empty()) continue;
    require_files({p});
    streams.push_back(evbench::load_events(p, res));
  }

  json report;
  report["schema"] = evbench::kReportSchema;
  report["command"] = "diagnose";
  report["config"] = {{"left", a.left},
                      {"right", a.right},
                      {"left_count", a.left_count ? json(*a.left_count) : json(nullptr)},
                      {"right_count", a.right_count ? json(*a.right_count) : json(nullptr)},
                      {"width", a.width},
                      {"height", a.height},
                      {"window", a.window},
                      {"time_map_window", a.time_map_window},
                      {"time_map_out", a.time_map_out},
                      {"time_map_8bit", a.time_map_8bit},
                      {"decay_tau", a.decay_tau},
                      {"fx", a.fx ? json(*a.fx) : json(nullptr)},
                      {"baseline", a.baselines},
                      {"eps", a.eps},
                      {"du", a.du}};

  json sj = json::array();
  for (const auto& s : streams) {
    sj.push_back({{"camera_id", s.camera_id},
                  {"width", s.width},
                  {"height", s.height},
                  {"events", s.events.size()},
                  {"windowed_counts", evbench::to_json(evbench::windowed_event_counts(s, a.window))}});
  }
  report["streams"] = sj;

  std::optional<double> lc = a.left_count, rc = a.right_count;
  if (!a.left.empty() && !a.right.empty()) {
    lc = lc.value_or(static_cast<double>(streams[0].events.size()));
    rc = rc.value_or(static_cast<double>(streams[1].events.size()));
  }
  if (lc && rc) report["stereo"] = evbench::to_json(evbench::stereo_count_ratio(*lc, *rc));

  if (!a.time_map_out.empty()) {
    if (a.time_map_window.size() != 2) throw CLI::ValidationError("--time-map-window needs t0 t1");
    json maps = json::array();
    for (const auto& s : streams) {
      const auto tm = evbench::time_map(s, a.time_map_window[0], a.time_map_window[1], a.threads);
      const std::string path = a.time_map_out + "_" + s.camera_id + ".pgm";
      std::ofstream out(path, std::ios::binary);
      tm.write_pgm(out, !a.time_map_8bit, a.decay_tau);
      maps.push_back({{"camera_id", s.camera_id}, {"path", path}, {"active_pixels", tm.active_pixels()}});
    }
    report["time_maps"] = maps;
  }
  if (a.fx) report["depth_bounds"] = depth_table(*a.fx, a.baselines, a.eps, a.du);
  write_text(a.out, report.dump(2) + "\n");
  return kOk;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string pattern = "circle";
  double radius = 2.0, rate = 1.0, speed = 1.0, spin_rate = 3.0, duration = 10.0, hz = 120.0, t0 = 0.0;
  double vel_scale = 1.0, noise_pos = 0.0, noise_rot = 0.0;
  std::string event_profile, camera = "synth";
  int width = 640, height = 480;
  std::uint64_t seed = 0;
  std::string out, out_vel;
};

int run_synth(const SynthArgs& a) {
  if (a.out.empty()) throw CLI::ValidationError("--out is required");
  if (!a.event_profile.empty()) {
    const auto profile = evbench::synth::parse_rate_profile(a.event_profile);
    evbench::save_events(a.out, evbench::synth::synth_event_rate_stream(profile, a.width, a.height, a.seed, a.camera));
    return kOk;
  }
  evbench::synth::MotionPattern m;
  m.kind = evbench::synth::parse_pattern_kind(a.pattern);
  m.radius = a.radius;
  m.rate = a.rate;
  m.speed = a.speed;
  m.spin_rate = a.spin_rate;
  m.duration = a.duration;
  m.sample_hz = a.hz;
  m.t0 = a.t0;
  auto st = evbench::synth::synth_trajectory(m);
  evbench::save_trajectory(a.out, evbench::synth::perturb_trajectory(st.trajectory, {a.noise_pos, a.noise_rot, a.seed}));
  if (!a.out_vel.empty()) evbench::save_velocities(a.out_vel, evbench::synth::scale_velocities(st.velocities, a.vel_scale));
  return kOk;
}

// ---------------------------------------------------------------------------

struct FocusArgs {
  double window = 0.1, cadence = 10.0, peak_fraction = 0.9, ratio_tol = 10.0;
  std::string stimulus = "checkerboard_flicker";
  double stimulus_freq = 5.0;
  std::string bind = "127.0.0.1";
  int port = 8765;
  std::string left, right;  // replay files or live inputs
  double speed = 1.0;
  std::string out;

  evbench::focus::FocusConfig config() const {
    evbench::focus::FocusConfig c;
    c.window_s = window;
    c.cadence_hz = cadence;
    c.peak_fraction = peak_fraction;
    c.ratio_tolerance_percent = ratio_tol;
    c.stimulus.kind = stimulus == "rotating_line" ? evbench::focus::StimulusKind::rotating_line
                                                  : evbench::focus::StimulusKind::checkerboard_flicker;
    c.stimulus.frequency = stimulus_freq;
    return c;
  }
};

int run_focus_serve(const FocusArgs& a) {
  namespace focus = evbench::focus;
  auto service = std::make_shared<focus::FocusService>(a.config());
  focus::FocusServer server(*service, a.bind, static_cast<unsigned short>(a.port));
  server.start();
  std::cerr << "focus service on http://" << a.bind << ":" << server.port() << " (ws /ws/focus)\n";

  for (const auto& [path, cam] : {std::pair{a.left, focus::Camera::left}, std::pair{a.right, focus::Camera::right}}) {
    std::thread([service, path = path, cam = cam] {
      try {
        focus::stream_into(*service, cam, path, g_stop);
      } catch (const std::exception& e) {
        std::cerr << "input " << path << ": " << e.what() << "\n";
      }
    }).detach();
  }

  const auto period = std::chrono::duration<double>(1.0 / a.cadence);
  auto next = std::chrono::steady_clock::now();
  while (!g_stop) {
    next += std::chrono::duration_cast<std::chrono::steady_clock::duration>(period);
    std::this_thread::sleep_until(next);
    server.publish(service->snapshot());
  }
  server.stop();
  return kOk;
}

int run_focus_replay(const FocusArgs& a) {
  namespace focus = evbench::focus;
  require_files({a.left, a.right});
  const auto left = evbench::load_events(a.left, {}, "left");
  const auto right = evbench::load_events(a.right, {}, "right");
  focus::FocusService service(a.config());

  if (a.port <= 0) {
    std::ofstream file;
    if (!a.out.empty()) file.open(a.out);
    std::ostream& out = a.out.empty() ? std::cout : file;
    focus::replay(service, left, right, [&](const focus::FocusSnapshot& s) { out << focus::to_json(s).dump() << '\n'; });
    return kOk;
  }
  focus::FocusServer server(service, a.bind, static_cast<unsigned short>(a.port));
  server.start();
  std::cerr << "replaying on http://" << a.bind << ":" << server.port() << " (ws /ws/focus)\n";
  focus::ReplayOptions opt;
  opt.speed = a.speed;
  opt.stop = [] { return g_stop.load(); };
  focus::replay(service, left, right, [&](const focus::FocusSnapshot& s) { server.publish(s); }, opt);
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  return kOk;
}

void add_focus_options(CLI::App* app, FocusArgs& a) {
  app->add_option("--window", a.window, "rate window in seconds")->capture_default_str();
  app->add_option("--cadence", a.cadence, "snapshots per second")->capture_default_str();
  app->add_option("--peak-fraction", a.peak_fraction, "in-focus: rates within this fraction of their peaks")->capture_default_str();
  app->add_option("--ratio-tol", a.ratio_tol, "in-focus: max |left/right difference| in percent")->capture_default_str();
  app->add_option("--stimulus", a.stimulus, "checkerboard_flicker | rotating_line")
      ->check(CLI::IsMember({"checkerboard_flicker", "rotating_line"}))
      ->capture_default_str();
  app->add_option("--stimulus-freq", a.stimulus_freq, "flicker Hz or rotation rad/s")->capture_default_str();
  app->add_option("--bind", a.bind)->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evbench: event-camera state-estimation evaluation and dataset diagnostics"};
  app.require_subcommand(1);

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "score estimated trajectories against ground truth");
  evaluate->add_option("--gt", ev.gt, "ground-truth TUM trajectory (repeatable)")->required();
  evaluate->add_option("--est", ev.est, "estimated TUM trajectory (repeatable)")->required();
  evaluate->add_option("--est-vel", ev.est_vel, "estimated velocity file 't vx vy vz [wx wy wz]' (repeatable)");
  evaluate->add_option("--name", ev.names, "sequence id (repeatable)");
  evaluate->add_option("--align", ev.align)->check(CLI::IsMember({"se3", "sim3", "none"}))->capture_default_str();
  evaluate->add_option("--agg", ev.agg)->check(CLI::IsMember({"rms", "paper-eq2"}))->capture_default_str();
  evaluate->add_option("--weights", ev.weights, "headline AUC weighting")
      ->check(CLI::IsMember({"uniform", "velocity", "combined"}))
      ->capture_default_str();
  evaluate->add_option("--assoc", ev.assoc)->check(CLI::IsMember({"nearest", "interpolate"}))->capture_default_str();
  evaluate->add_option("--xi-max", ev.xi_max)->check(CLI::PositiveNumber)->capture_default_str();
  evaluate->add_option("--xi-points", ev.xi_points)->check(CLI::Range(2, 1000000))->capture_default_str();
  evaluate->add_option("--speed-floor", ev.speed_floor, "m/s; slower samples are excluded from RVE")->capture_default_str();
  evaluate->add_option("--max-dt", ev.max_dt, "association tolerance in seconds");
  evaluate->add_option("--rpe-delta", ev.rpe_delta, "RPE step in samples");
  evaluate->add_option("--smoothing", ev.smoothing, "velocity moving-average half-width")->capture_default_str();
  evaluate->add_option("--out", ev.out, "report path (default stdout)");
  evaluate->add_option("--svg", ev.svg, "directory for SVG plots");
  evaluate->add_option("--seed", ev.seed)->capture_default_str();
  evaluate->add_option("--jobs", ev.jobs, "parallel sequences (0 = hardware threads)");

  DiagnoseArgs dg;
  auto* diagnose = app.add_subcommand("diagnose", "event-stream diagnostics");
  diagnose->add_option("--left", dg.left, "left (or single) event file");
  diagnose->add_option("--right", dg.right, "right event file");
  diagnose->add_option("--left-count", dg.left_count, "left event count (instead of a file)");
  diagnose->add_option("--right-count", dg.right_count, "right event count (instead of a file)");
  diagnose->add_option("--width", dg.width, "sensor width for csv input");
  diagnose->add_option("--height", dg.height, "sensor height for csv input");
  diagnose->add_option("--window", dg.window, "count window in seconds")->check(CLI::PositiveNumber)->capture_default_str();
  diagnose->add_option("--time-map-window", dg.time_map_window, "t0 t1 in seconds")->expected(2);
  diagnose->add_option("--time-map-out", dg.time_map_out, "PGM path prefix");
  diagnose->add_flag("--time-map-8bit", dg.time_map_8bit);
  diagnose->add_option("--decay-tau", dg.decay_tau, "exponential-decay rendering constant (s)");
  diagnose->add_option("--fx", dg.fx, "focal length (px) for the depth-bound table");
  diagnose->add_option("--baseline", dg.baselines, "stereo baselines (m)");
  diagnose->add_option("--eps", dg.eps)->capture_default_str();
  diagnose->add_option("--du", dg.du)->capture_default_str();
  diagnose->add_option("--threads", dg.threads)->capture_default_str();
  diagnose->add_option("--out", dg.out, "report path (default stdout)");

  double fx = 0.0, eps = 0.15, du = 0.5;
  std::vector<double> baselines;
  std::string depth_out;
  auto* depth = app.add_subcommand("depth-bound", "maximum reliable stereo depth");
  depth->add_option("--fx", fx, "focal length in pixels")->required()->check(CLI::PositiveNumber);
  depth->add_option("--baseline", baselines, "baseline(s) in meters")->required();
  depth->add_option("--eps", eps, "relative depth error bound")->capture_default_str();
  depth->add_option("--du", du, "disparity error in pixels")->capture_default_str();
  depth->add_option("--out", depth_out, "JSON path (default stdout)");

  std::string flow_in, flow_out;
  int flow_w = 0, flow_h = 0;
  double flow_xi_max = 1.0;
  std::size_t flow_points = 256;
  auto* flow = app.add_subcommand("flow-difficulty", "resolution-normalized optical-flow difficulty");
  flow->add_option("--input", flow_in, "text file, one magnitude or 'u v' per line")->required();
  flow->add_option("--width", flow_w)->required();
  flow->add_option("--height", flow_h)->required();
  flow->add_option("--xi-max", flow_xi_max)->capture_default_str();
  flow->add_option("--xi-points", flow_points)->capture_default_str();
  flow->add_option("--out", flow_out, "JSON path (default stdout)");

  SynthArgs sy;
  auto* synth = app.add_subcommand("synth", "write synthetic trajectory or event fixtures");
  synth->add_option("--pattern", sy.pattern)
      ->check(CLI::IsMember({"line", "circle", "lemniscate", "spin_circle"}))
      ->capture_default_str();
  synth->add_option("--radius", sy.radius)->capture_default_str();
  synth->add_option("--rate", sy.rate, "angular rate along the path (rad/s)")->capture_default_str();
  synth->add_option("--speed", sy.speed, "line speed (m/s)")->capture_default_str();
  synth->add_option("--spin-rate", sy.spin_rate, "spin_circle body yaw rate (rad/s)")->capture_default_str();
  synth->add_option("--duration", sy.duration)->capture_default_str();
  synth->add_option("--hz", sy.hz)->capture_default_str();
  synth->add_option("--t0", sy.t0)->capture_default_str();
  synth->add_option("--vel-scale", sy.vel_scale, "multiply written velocities")->capture_default_str();
  synth->add_option("--noise-pos", sy.noise_pos)->capture_default_str();
  synth->add_option("--noise-rot", sy.noise_rot)->capture_default_str();
  synth->add_option("--event-profile", sy.event_profile, "events instead: 't:rate,...;end', e.g. '0:1000,5:5000;10'");
  synth->add_option("--width", sy.width)->capture_default_str();
  synth->add_option("--height", sy.height)->capture_default_str();
  synth->add_option("--camera", sy.camera)->capture_default_str();
  synth->add_option("--seed", sy.seed)->capture_default_str();
  synth->add_option("--out", sy.out, "trajectory (.txt) or event (.evb/.csv) path")->required();
  synth->add_option("--out-vel", sy.out_vel, "velocity file path");

  FocusArgs fs_args, fr_args;
  auto* focus = app.add_subcommand("focus", "stereo focus assistant");
  focus->require_subcommand(1);
  auto* serve = focus->add_subcommand("serve", "live mode: read two packed-binary event inputs");
  add_focus_options(serve, fs_args);
  serve->add_option("--left-input", fs_args.left, "left event input (file or FIFO)")->required();
  serve->add_option("--right-input", fs_args.right, "right event input (file or FIFO)")->required();
  serve->add_option("--port", fs_args.port)->capture_default_str();
  auto* replay = focus->add_subcommand("replay", "replay recorded streams");
  add_focus_options(replay, fr_args);
  fr_args.port = 0;
  replay->add_option("--left", fr_args.left)->required();
  replay->add_option("--right", fr_args.right)->required();
  replay->add_option("--port", fr_args.port, "serve on this port; 0 prints snapshots as JSON lines")->capture_default_str();
  replay->add_option("--speed", fr_args.speed, "wall-clock pacing factor when serving")->capture_default_str();
  replay->add_option("--out", fr_args.out, "JSON-lines path when not serving");

  CLI11_PARSE(app, argc, argv);
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  try {
    if (*evaluate) return run_evaluate(ev);
    if (*diagnose) return run_diagnose(dg);
    if (*depth) {
      json out = {{"schema", evbench::kReportSchema}, {"command", "depth-bound"}, {"rows", depth_table(fx, baselines, eps, du)}};
      write_text(depth_out, out.dump(2) + "\n");
      return kOk;
    }
    if (*flow) {
      require_files({flow_in});
      std::ifstream in(flow_in);
      std::vector<double> mags;
      std::string line;
      std::size_t line_no = 0;
      while (std::getline(in, line)) {
        ++line_no;
        if (evbench::detail::is_comment_or_blank(line)) continue;
        const auto f = evbench::detail::split_ws(line);
        if (f.size() == 1) {
          mags.push_back(evbench::detail::field_double(f[0], line_no, "magnitude"));
        } else if (f.size() == 2) {
          mags.push_back(std::hypot(evbench::detail::field_double(f[0], line_no, "u"),
                                    evbench::detail::field_double(f[1], line_no, "v")));
        } else {
          throw evbench::ParseError("expected 'magnitude' or 'u v'", line_no);
        }
      }
      const auto grid = evbench::make_xi_grid(flow_xi_max, flow_points);
      json out = {{"schema", evbench::kReportSchema},
                  {"command", "flow-difficulty"},
                  {"config", {{"input", flow_in}, {"width", flow_w}, {"height", flow_h}, {"xi_max", flow_xi_max}, {"xi_points", flow_points}}},
                  {"flow_difficulty", evbench::to_json(evbench::flow_difficulty(mags, flow_w, flow_h, grid))}};
      write_text(flow_out, out.dump(2) + "\n");
      return kOk;
    }
    if (*synth) return run_synth(sy);
    if (*serve) return run_focus_serve(fs_args);
    if (*replay) return run_focus_replay(fr_args);
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMissingFile;
  } catch (const evbench::NoOverlapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoOverlap;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
