#pragma once

// JSON serialization of evaluation/diagnostics results and SVG views built
// from the serialized JSON (plots never carry numbers the report lacks).
//
// All angles are radians, distances meters, times seconds.

#include "evbench/diagnostics.hpp"
#include "evbench/evaluation.hpp"
#include "evbench/focus.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace evbench {

using json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "evbench_report_v1";

inline json conventions_json() {
  return {
      {"units", {{"angle", "rad"}, {"distance", "m"}, {"time", "s"}}},
      {"se3_log", "exact closed form with the inverse SO(3) left Jacobian"},
      {"ate_headline", "translation_only"},
      {"rve_indicator", "strict: RVE_i < xi"},
      {"auc", "trapezoid over [0, xi_max] divided by xi_max"},
      {"velocity_grid", "estimate timestamps; ground truth interpolated linearly"},
  };
}

inline json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

inline json to_json(const SimilarityTransform& s) {
  const auto& q = s.pose.rotation();
  return {{"scale", s.scale},
          {"rotation_wxyz", json::array({q.w(), q.x(), q.y(), q.z()})},
          {"translation", to_json(s.pose.translation())}};
}

inline json to_json(const SeriesStats& s) {
  return {{"mean", s.mean}, {"median", s.median}, {"std", s.stddev}, {"min", s.min}, {"max", s.max}};
}

inline json to_json(const PartErrors& p) { return {{"rms", p.rms}, {"paper_eq2", p.paper_eq2}}; }

inline json to_json(const MetricReport& r) {
  json seq;
  seq["id"] = r.sequence_id;
  json align = to_json(r.alignment);
  align["mode"] = std::string(to_string(r.align));
  seq["alignment"] = align;
  seq["association"] = {{"max_dt", r.max_dt}};
  seq["counts"] = {{"est_samples", r.est_samples},
                   {"gt_samples", r.gt_samples},
                   {"pairs", r.pairs},
                   {"dropped", r.dropped},
                   {"rve_samples", r.rve.size()},
                   {"rve_excluded", r.rve_excluded}};
  seq["ate"] = {{"headline", r.ate},
                {"aggregation", std::string(to_string(r.headline_aggregation))},
                {"translation_only", to_json(r.ate_translation)},
                {"full_se3", to_json(r.ate_full)}};
  if (r.rpe_delta) {
    seq["rpe"] = {{"delta", *r.rpe_delta},
                  {"translation_only", to_json(*r.rpe_translation)},
                  {"full_se3", to_json(*r.rpe_full)}};
  } else {
    seq["rpe"] = nullptr;
  }
  seq["velocity"] = {{"source", r.velocity_source.empty() ? json(nullptr) : json(r.velocity_source)},
                     {"ave", to_json(series_stats(r.ave))},
                     {"rve", to_json(series_stats(r.rve))}};

  json precision;
  precision["headline_weights"] = std::string(to_string(r.headline_weights));
  precision["auc"] = r.auc ? json(*r.auc) : json(nullptr);
  precision["xi"] = r.curves.empty() ? json::array() : json(r.curves.front().curve.xi);
  json curves = json::object();
  for (const auto& c : r.curves) {
    curves[std::string(to_string(c.curve.weighting))] = {{"auc", c.auc}, {"s", c.curve.s}};
  }
  precision["curves"] = curves;
  seq["precision"] = precision;

  json series;
  series["ate_t"] = r.ate_translation.series.t;
  series["ate_translation"] = r.ate_translation.series.value;
  series["ate_full_se3"] = r.ate_full.series.value;
  if (r.rpe_delta) {
    series["rpe_t"] = r.rpe_translation->series.t;
    series["rpe_translation"] = r.rpe_translation->series.value;
    series["rpe_full_se3"] = r.rpe_full->series.value;
  }
  series["ave_t"] = r.ave.t;
  series["ave"] = r.ave.value;
  series["rve_t"] = r.rve.t;
  series["rve"] = r.rve.value;
  seq["series"] = series;
  seq["warnings"] = r.warnings;
  return seq;
}

inline json to_json(const StereoCountReport& s) {
  return {{"left_count", s.left_count},
          {"right_count", s.right_count},
          {"ratio_percent", s.ratio_percent},
          {"threshold_percent", kStereoConsistencyPercent},
          {"inconsistent", s.inconsistent}};
}

inline json to_json(const WindowedCounts& w) {
  return {{"start_us", w.start_us}, {"window_s", static_cast<double>(w.window_us) / 1e6}, {"counts", w.counts},
          {"last_partial", w.last_partial}};
}

inline json to_json(const FlowDifficulty& f) {
  return {{"curve", "survival P(|flow|/diagonal > xi)"}, {"auc", f.auc}, {"samples", f.normalized.size()},
          {"xi", f.xi}, {"survival", f.survival}};
}

namespace focus {

inline json to_json(const FocusSnapshot& s) {
  return {{"t", s.t},
          {"left_rate", s.left_rate},
          {"right_rate", s.right_rate},
          {"ratio_percent", s.ratio_percent ? json(*s.ratio_percent) : json(nullptr)},
          {"left_peak", s.left_peak},
          {"right_peak", s.right_peak},
          {"window", s.window},
          {"in_focus", s.in_focus}};
}

inline json to_json(const FocusConfig& c) {
  return {{"window", c.window_s},
          {"cadence_hz", c.cadence_hz},
          {"thresholds", {{"peak_fraction", c.peak_fraction}, {"ratio_tolerance_percent", c.ratio_tolerance_percent}}},
          {"stimulus",
           {{"kind", std::string(to_string(c.stimulus.kind))},
            {"frequency", c.stimulus.frequency},
            {"grid_size", c.stimulus.grid_size},
            {"contrast", c.stimulus.contrast}}}};
}

}  // namespace focus

// ---------------------------------------------------------------------------
// SVG views

namespace detail {

struct Plot {
  double x0, x1, y0, y1;
  static constexpr double kW = 640, kH = 400, kPad = 50;

  double px(double x) const { return kPad + (x - x0) / (x1 - x0) * (kW - 2 * kPad); }
  double py(double y) const { return kH - kPad - (y - y0) / (y1 - y0) * (kH - 2 * kPad); }
};

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Tick labels are JSON values printed with the JSON serializer.
struct Tick {
  double value;
  std::string text;
};

inline Tick tick(const json& v) { return {v.get<double>(), v.dump()}; }

inline void svg_frame(std::ostringstream& o, const Plot& p, const std::string& title, const std::string& xlabel,
                      const std::string& ylabel, const std::vector<Tick>& xticks, const std::vector<Tick>& yticks) {
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Plot::kW << "\" height=\"" << Plot::kH << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << Plot::kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\">" << title << "</text>\n";
  o << "<line x1=\"" << p.px(p.x0) << "\" y1=\"" << p.py(p.y0) << "\" x2=\"" << p.px(p.x1) << "\" y2=\"" << p.py(p.y0)
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << p.px(p.x0) << "\" y1=\"" << p.py(p.y0) << "\" x2=\"" << p.px(p.x0) << "\" y2=\"" << p.py(p.y1)
    << "\" stroke=\"black\"/>\n";
  o << "<text x=\"" << Plot::kW / 2 << "\" y=\"" << Plot::kH - 10 << "\" text-anchor=\"middle\" font-family=\"sans-serif\">"
    << xlabel << "</text>\n";
  o << "<text x=\"15\" y=\"" << Plot::kH / 2 << "\" transform=\"rotate(-90 15 " << Plot::kH / 2
    << ")\" text-anchor=\"middle\" font-family=\"sans-serif\">" << ylabel << "</text>\n";
  for (const auto& t : xticks) {
    o << "<text class=\"tick\" x=\"" << p.px(t.value) << "\" y=\"" << p.py(p.y0) + 15
      << "\" text-anchor=\"middle\" font-size=\"10\">" << t.text << "</text>\n";
  }
  for (const auto& t : yticks) {
    o << "<text class=\"tick\" x=\"" << p.px(p.x0) - 5 << "\" y=\"" << p.py(t.value) + 3
      << "\" text-anchor=\"end\" font-size=\"10\">" << t.text << "</text>\n";
  }
}

inline void svg_polyline(std::ostringstream& o, const Plot& p, const json& xs, const json& ys, const char* color,
                         const std::string& label) {
  o << "<polyline data-series=\"" << label << "\" fill=\"none\" stroke=\"" << color << "\" points=\"";
  for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
    if (ys[i].is_null()) continue;
    o << num(p.px(xs[i].get<double>())) << ',' << num(p.py(ys[i].get<double>())) << ' ';
  }
  o << "\"/>\n";
}

}  // namespace detail

/// Precision curves S(ξ) of one serialized sequence, one line per weighting.
inline std::string precision_curves_svg(const json& sequence) {
  const json& prec = sequence.at("precision");
  const json& xi = prec.at("xi");
  std::ostringstream o;
  const double xmax = xi.empty() ? 1.0 : xi.back().get<double>();
  const detail::Plot p{0.0, xmax, 0.0, 1.0};
  std::vector<detail::Tick> xticks;
  if (!xi.empty()) xticks = {detail::tick(xi.front()), detail::tick(xi.back())};
  detail::svg_frame(o, p, "Relative-velocity precision " + sequence.at("id").get<std::string>(), "xi (RVE threshold)",
                    "S(xi)", xticks, {});
  static constexpr const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c"};
  int k = 0, row = 0;
  for (const auto& [name, c] : prec.at("curves").items()) {
    detail::svg_polyline(o, p, xi, c.at("s"), colors[k % 3], name);
    o << "<text x=\"" << detail::Plot::kW - 200 << "\" y=\"" << 60 + 16 * row++ << "\" fill=\"" << colors[k % 3]
      << "\" font-size=\"12\">" << name << " AUC <tspan class=\"value\">" << c.at("auc").dump() << "</tspan></text>\n";
    ++k;
  }
  o << "</svg>\n";
  return o.str();
}

/// Translation ATE (and RPE when present) against time for one serialized sequence.
inline std::string error_trace_svg(const json& sequence) {
  const json& s = sequence.at("series");
  const json& t = s.at("ate_t");
  const json* ymax_node = nullptr;
  auto scan = [&](const json& arr) {
    for (const auto& v : arr) {
      if (ymax_node == nullptr || v.get<double>() > ymax_node->get<double>()) ymax_node = &v;
    }
  };
  scan(s.at("ate_translation"));
  if (s.contains("rpe_translation")) scan(s.at("rpe_translation"));
  double ymax = ymax_node != nullptr ? ymax_node->get<double>() : 0.0;
  std::vector<detail::Tick> yticks;
  if (ymax > 0.0) yticks.push_back(detail::tick(*ymax_node));
  if (!(ymax > 0.0)) ymax = 1.0;
  const double t0 = t.empty() ? 0.0 : t.front().get<double>();
  double t1 = t.empty() ? 1.0 : t.back().get<double>();
  if (!(t1 > t0)) t1 = t0 + 1.0;
  std::ostringstream o;
  const detail::Plot p{t0, t1, 0.0, ymax};
  std::vector<detail::Tick> xticks;
  if (!t.empty()) xticks = {detail::tick(t.front()), detail::tick(t.back())};
  detail::svg_frame(o, p, "Translation error " + sequence.at("id").get<std::string>(), "t (s)", "error (m)", xticks, yticks);
  detail::svg_polyline(o, p, t, s.at("ate_translation"), "#1f77b4", "ate_translation");
  if (s.contains("rpe_translation")) detail::svg_polyline(o, p, s.at("rpe_t"), s.at("rpe_translation"), "#d62728", "rpe_translation");
  o << "</svg>\n";
  return o.str();
}

}  // namespace evbench
