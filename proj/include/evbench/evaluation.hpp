#pragma once

// End-to-end scoring of one estimated trajectory against ground truth:
// association, spatial alignment, ATE/RPE, velocity errors and precision
// curves for every weighting scheme.

#include "evbench/alignment.hpp"
#include "evbench/ingest.hpp"
#include "evbench/metrics.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace evbench {

enum class AlignMode { se3, sim3, none };

inline std::string_view to_string(AlignMode m) {
  switch (m) {
    case AlignMode::se3: return "se3";
    case AlignMode::sim3: return "sim3";
    case AlignMode::none: return "none";
  }
  return "?";
}

struct EvaluateConfig {
  std::string sequence_id = "sequence";
  AlignMode align = AlignMode::se3;
  AssociationMode association = AssociationMode::interpolate;
  std::optional<double> max_dt;  // default: 1.5 × median gt spacing
  Aggregation aggregation = Aggregation::rms;
  WeightScheme weights = WeightScheme::velocity;
  double xi_max = 1.0;
  std::size_t xi_points = 256;
  double speed_floor = 0.05;
  std::optional<std::size_t> rpe_delta;  // default: samples closest to 1 s
  std::size_t smoothing_halfwidth = 2;
};

struct PartErrors {
  ErrorSeries series;
  double rms = 0.0;
  double paper_eq2 = 0.0;
};

struct CurveResult {
  PrecisionCurve curve;
  double auc = 0.0;
};

struct MetricReport {
  std::string sequence_id;
  AlignMode align = AlignMode::se3;
  SimilarityTransform alignment;
  double max_dt = 0.0;

  std::size_t est_samples = 0;
  std::size_t gt_samples = 0;
  std::size_t pairs = 0;
  std::size_t dropped = 0;  // estimate samples without a ground-truth match

  PartErrors ate_translation;
  PartErrors ate_full;
  std::optional<std::size_t> rpe_delta;
  std::optional<PartErrors> rpe_translation;
  std::optional<PartErrors> rpe_full;

  std::string velocity_source;  // "file" or "derived_from_poses"
  ErrorSeries ave;
  ErrorSeries rve;
  std::size_t rve_excluded = 0;
  std::vector<CurveResult> curves;  // one per available weighting scheme

  Aggregation headline_aggregation = Aggregation::rms;
  WeightScheme headline_weights = WeightScheme::velocity;
  double ate = 0.0;  // translation_only, headline aggregation
  std::optional<double> auc;

  std::vector<std::string> warnings;
};

namespace detail {

inline PartErrors part_errors(ErrorSeries s) {
  PartErrors p{std::move(s), 0.0, 0.0};
  p.rms = aggregate(p.series, Aggregation::rms);
  p.paper_eq2 = aggregate(p.series, Aggregation::paper_eq2);
  return p;
}

}  // namespace detail

/// `est_velocity`, when given, is in the estimator's world frame; it is
/// rotated and scaled by the alignment before comparison.
inline MetricReport evaluate_sequence(const Trajectory& gt, const Trajectory& est, const EvaluateConfig& cfg,
                                      const std::optional<std::vector<VelocitySample>>& est_velocity = std::nullopt) {
  MetricReport rep;
  rep.sequence_id = cfg.sequence_id;
  rep.align = cfg.align;
  rep.headline_aggregation = cfg.aggregation;
  rep.headline_weights = cfg.weights;
  rep.est_samples = est.size();
  rep.gt_samples = gt.size();
  rep.max_dt = cfg.max_dt ? *cfg.max_dt : default_max_dt(gt);

  const auto raw_pairs = associate(est, gt, rep.max_dt, cfg.association);
  rep.pairs = raw_pairs.size();
  rep.dropped = est.size() - raw_pairs.size();

  if (cfg.align != AlignMode::none) rep.alignment = umeyama_align(raw_pairs, cfg.align == AlignMode::sim3);
  const auto pairs = transform_estimates(raw_pairs, rep.alignment);

  rep.ate_translation = detail::part_errors(ate_series(pairs, PosePart::translation_only));
  rep.ate_full = detail::part_errors(ate_series(pairs, PosePart::full_se3));
  rep.ate = cfg.aggregation == Aggregation::rms ? rep.ate_translation.rms : rep.ate_translation.paper_eq2;

  if (pairs.size() >= 2) {
    const std::size_t delta = cfg.rpe_delta ? *cfg.rpe_delta : default_rpe_delta(pairs);
    if (delta < pairs.size()) {
      rep.rpe_delta = delta;
      rep.rpe_translation = detail::part_errors(rpe_series(pairs, delta, PosePart::translation_only));
      rep.rpe_full = detail::part_errors(rpe_series(pairs, delta, PosePart::full_se3));
    } else {
      rep.warnings.push_back("RPE skipped: delta " + std::to_string(delta) + " exceeds the associated pairs");
    }
  }

  // Velocities on the estimate timestamps; ground truth interpolated linearly.
  std::vector<double> times;
  times.reserve(pairs.size());
  for (const auto& p : pairs) times.push_back(p.t);

  if (gt.size() < 3) {
    rep.warnings.push_back("velocity metrics skipped: ground truth has fewer than 3 samples");
    return rep;
  }
  auto gt_vel = derive_velocities(gt, cfg.smoothing_halfwidth);
  for (auto& w : gt_vel.warnings) rep.warnings.push_back("ground truth " + w);
  const auto v_gt = interpolate_velocities(gt_vel.samples, times);

  std::vector<VelocitySample> v_est;
  if (est_velocity) {
    rep.velocity_source = "file";
    const double s = rep.alignment.scale;
    const Rotation& r = rep.alignment.pose.rotation();
    v_est = interpolate_velocities(*est_velocity, times);
    for (auto& v : v_est) v.v = s * (r * v.v);
  } else {
    if (est.size() < 3) {
      rep.warnings.push_back("velocity metrics skipped: estimate has fewer than 3 samples and no velocity file");
      return rep;
    }
    rep.velocity_source = "derived_from_poses";
    auto est_vel = derive_velocities(transform_trajectory(est, rep.alignment), cfg.smoothing_halfwidth);
    for (auto& w : est_vel.warnings) rep.warnings.push_back("estimate " + w);
    v_est = interpolate_velocities(est_vel.samples, times);
  }

  auto errs = rve_series(v_gt, v_est, cfg.speed_floor);
  rep.ave = std::move(errs.ave);
  rep.rve = std::move(errs.rve);
  rep.rve_excluded = errs.excluded;
  if (rep.rve.empty()) {
    rep.warnings.push_back("precision curves skipped: every sample is below the speed floor");
    return rep;
  }

  std::vector<VelocitySample> kept;
  kept.reserve(errs.kept.size());
  for (std::size_t i : errs.kept) kept.push_back(v_gt[i]);
  const auto grid = make_xi_grid(cfg.xi_max, cfg.xi_points);
  for (WeightScheme scheme : {WeightScheme::uniform, WeightScheme::velocity, WeightScheme::combined}) {
    const auto w = weights(kept, scheme);
    CurveResult c{precision_curve(rep.rve, w, grid, scheme), 0.0};
    c.auc = curve_auc(c.curve, cfg.xi_max);
    if (scheme == cfg.weights) rep.auc = c.auc;
    rep.curves.push_back(std::move(c));
  }
  return rep;
}

}  // namespace evbench
