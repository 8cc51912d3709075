#pragma once

// Temporal association of estimate/ground-truth samples, closed-form
// SE(3)/Sim(3) point-set alignment, and AX = XB hand-eye calibration.

#include "evbench/error.hpp"
#include "evbench/geometry.hpp"
#include "evbench/ingest.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace evbench {

struct AssociatedPair {
  double t = 0.0;  // estimate timestamp
  Pose pose_gt;
  Pose pose_est;
};

enum class AssociationMode { nearest, interpolate };

/// 1.5 × the median ground-truth sample spacing.
inline double default_max_dt(const Trajectory& gt) {
  if (gt.size() < 2) throw std::invalid_argument("ground truth needs at least 2 samples");
  std::vector<double> dt;
  dt.reserve(gt.size() - 1);
  for (std::size_t i = 1; i < gt.size(); ++i) dt.push_back(gt[i].t - gt[i - 1].t);
  auto mid = dt.begin() + static_cast<std::ptrdiff_t>(dt.size() / 2);
  std::nth_element(dt.begin(), mid, dt.end());
  double median = *mid;
  if (dt.size() % 2 == 0) median = 0.5 * (median + *std::max_element(dt.begin(), mid));
  return 1.5 * median;
}

/// One pair per estimate sample that has a ground-truth match within `max_dt`.
/// In interpolate mode ground truth is evaluated at the estimate timestamp from
/// the bracketing samples, both of which must lie within `max_dt`.
inline std::vector<AssociatedPair> associate(const Trajectory& est, const Trajectory& gt, double max_dt,
                                             AssociationMode mode = AssociationMode::interpolate) {
  if (est.empty() || gt.empty()) throw std::invalid_argument("association needs non-empty trajectories");
  if (!(max_dt >= 0.0)) throw std::invalid_argument("max_dt must be non-negative");
  const auto& g = gt.samples();
  std::vector<AssociatedPair> pairs;
  for (const auto& e : est) {
    const auto hi = std::lower_bound(g.begin(), g.end(), e.t, [](const TrajectorySample& s, double t) { return s.t < t; });
    if (hi != g.end() && hi->t == e.t) {
      pairs.push_back({e.t, hi->pose, e.pose});
      continue;
    }
    if (mode == AssociationMode::nearest) {
      const TrajectorySample* best = nullptr;
      if (hi != g.end()) best = &*hi;
      if (hi != g.begin()) {
        const auto& lo = *(hi - 1);
        if (best == nullptr || e.t - lo.t <= best->t - e.t) best = &lo;
      }
      if (best != nullptr && std::abs(best->t - e.t) <= max_dt) pairs.push_back({e.t, best->pose, e.pose});
    } else {
      if (hi == g.end() || hi == g.begin()) continue;
      const auto& lo = *(hi - 1);
      if (e.t - lo.t > max_dt || hi->t - e.t > max_dt) continue;
      const double alpha = (e.t - lo.t) / (hi->t - lo.t);
      pairs.push_back({e.t, interpolate_pose(lo.pose, hi->pose, alpha), e.pose});
    }
  }
  if (pairs.empty()) throw NoOverlapError();
  return pairs;
}

/// x ↦ s·R·x + t.
struct SimilarityTransform {
  double scale = 1.0;
  Pose pose;

  static SimilarityTransform identity() { return {}; }
  bool is_identity() const { return scale == 1.0 && pose == Pose(); }

  Vec3 operator*(const Vec3& p) const { return scale * (pose.rotation() * p) + pose.translation(); }
  Pose operator*(const Pose& p) const {
    return {pose.rotation() * p.rotation(), (*this) * p.translation()};
  }
  SimilarityTransform inverse() const {
    const Rotation ri = pose.rotation().inverse();
    return {1.0 / scale, Pose(ri, -(ri * pose.translation()) / scale)};
  }
};

/// Σ‖p_gt − S(p_est)‖² over the pairs.
inline double alignment_residual(std::span<const AssociatedPair> pairs, const SimilarityTransform& s) {
  double sum = 0.0;
  for (const auto& p : pairs) sum += (p.pose_gt.translation() - s * p.pose_est.translation()).squaredNorm();
  return sum;
}

namespace detail {

// Singular values of the centered point cloud; rank < 2 means collinear or coincident.
inline bool points_degenerate(const Eigen::Matrix3Xd& centered) {
  const Eigen::JacobiSVD<Eigen::Matrix3Xd> svd(centered);
  const auto sv = svd.singularValues();
  return !(sv(0) > 0.0) || sv(1) <= 1e-9 * sv(0);
}

}  // namespace detail

/// Least-squares similarity mapping estimate positions onto ground truth
/// (closed form with reflection correction); scale is 1 unless `with_scale`.
inline SimilarityTransform umeyama_align(std::span<const AssociatedPair> pairs, bool with_scale) {
  const auto n = static_cast<Eigen::Index>(pairs.size());
  if (n < 3) throw DegenerateGeometryError("alignment needs at least 3 pairs, got " + std::to_string(n));
  Eigen::Matrix3Xd src(3, n);
  Eigen::Matrix3Xd dst(3, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    src.col(i) = pairs[static_cast<std::size_t>(i)].pose_est.translation();
    dst.col(i) = pairs[static_cast<std::size_t>(i)].pose_gt.translation();
  }
  const Vec3 mu_src = src.rowwise().mean();
  const Vec3 mu_dst = dst.rowwise().mean();
  src.colwise() -= mu_src;
  dst.colwise() -= mu_dst;
  if (detail::points_degenerate(dst) || detail::points_degenerate(src)) {
    throw DegenerateGeometryError("positions are collinear or coincident");
  }

  const Mat3 cov = dst * src.transpose() / static_cast<double>(n);
  const Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Vec3 d = Vec3::Ones();
  if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0.0) d(2) = -1.0;
  const Mat3 r = svd.matrixU() * d.asDiagonal() * svd.matrixV().transpose();

  double s = 1.0;
  if (with_scale) {
    const double var_src = src.squaredNorm() / static_cast<double>(n);
    s = svd.singularValues().dot(d) / var_src;
  }
  const Rotation rot = Rotation::from_matrix(r);
  return {s, Pose(rot, mu_dst - s * (rot * mu_src))};
}

inline Trajectory transform_trajectory(const Trajectory& traj, const SimilarityTransform& s) {
  if (s.is_identity()) return traj;
  std::vector<TrajectorySample> out;
  out.reserve(traj.size());
  for (const auto& smp : traj) out.push_back({smp.t, s * smp.pose});
  return Trajectory(std::move(out));
}

inline std::vector<AssociatedPair> transform_estimates(std::span<const AssociatedPair> pairs, const SimilarityTransform& s) {
  std::vector<AssociatedPair> out(pairs.begin(), pairs.end());
  if (s.is_identity()) return out;
  for (auto& p : out) p.pose_est = s * p.pose_est;
  return out;
}

// ---------------------------------------------------------------------------
// Hand-eye calibration

struct MotionPair {
  Pose a;  // hand motion
  Pose b;  // eye motion
};

struct HandEyeResult {
  Pose x;
  /// Σ pose_norm((A_i X)⁻¹ · X B_i)².
  double residual = 0.0;
};

/// Relative motions A_i = H_i⁻¹H_{i+1}, B_i = E_i⁻¹E_{i+1} from absolute hand
/// poses H (e.g. MoCap body in world) and eye poses E (e.g. camera in target
/// frame, inverted PnP), so that A_i X = X B_i with X the hand-to-eye transform.
inline std::vector<MotionPair> motion_pairs_from_poses(std::span<const Pose> hand, std::span<const Pose> eye) {
  if (hand.size() != eye.size()) throw std::invalid_argument("hand and eye pose lists differ in length");
  std::vector<MotionPair> out;
  for (std::size_t i = 0; i + 1 < hand.size(); ++i) {
    out.push_back({hand[i].inverse() * hand[i + 1], eye[i].inverse() * eye[i + 1]});
  }
  return out;
}

namespace detail {

struct DualQuat {
  Eigen::Vector4d real;  // (w, x, y, z)
  Eigen::Vector4d dual;
};

inline DualQuat to_dual_quat(const Pose& p) {
  Eigen::Quaterniond qr = p.rotation().quaternion();
  if (qr.w() < 0.0) qr.coeffs() = -qr.coeffs();
  const Eigen::Quaterniond t(0.0, p.translation().x(), p.translation().y(), p.translation().z());
  Eigen::Quaterniond qd = t * qr;
  qd.coeffs() *= 0.5;
  return {{qr.w(), qr.x(), qr.y(), qr.z()}, {qd.w(), qd.x(), qd.y(), qd.z()}};
}

}  // namespace detail

inline HandEyeResult hand_eye_residual(std::span<const MotionPair> pairs, const Pose& x) {
  HandEyeResult r{x, 0.0};
  for (const auto& p : pairs) {
    const double e = pose_norm((p.a * x).inverse() * (x * p.b));
    r.residual += e * e;
  }
  return r;
}

/// Solves A_i X = X B_i with the linear dual-quaternion formulation: rotation
/// and translation come jointly from the two-dimensional null space of the
/// stacked 6n×8 screw-congruence system.
inline HandEyeResult solve_hand_eye(std::span<const MotionPair> pairs) {
  if (pairs.size() < 2) throw DegenerateGeometryError("hand-eye needs at least 2 motion pairs");

  // Observability: rotation axes must span at least two directions.
  std::vector<Vec3> axes;
  for (const auto& p : pairs) {
    const Vec3 phi = p.a.rotation().log();
    if (phi.norm() > 1e-6) axes.push_back(phi.normalized());
  }
  double max_cross = 0.0;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    for (std::size_t j = i + 1; j < axes.size(); ++j) max_cross = std::max(max_cross, axes[i].cross(axes[j]).norm());
  }
  if (max_cross < 1e-6) {
    throw DegenerateGeometryError("unobservable translation: motion rotation axes span fewer than 2 directions");
  }

  Eigen::MatrixXd t(6 * static_cast<Eigen::Index>(pairs.size()), 8);
  t.setZero();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto a = detail::to_dual_quat(pairs[i].a);
    const auto b = detail::to_dual_quat(pairs[i].b);
    const Vec3 ar = a.real.tail<3>(), br = b.real.tail<3>();
    const Vec3 ad = a.dual.tail<3>(), bd = b.dual.tail<3>();
    Eigen::Matrix<double, 3, 4> s_real;
    s_real << ar - br, hat(ar + br);
    Eigen::Matrix<double, 3, 4> s_dual;
    s_dual << ad - bd, hat(ad + bd);
    const auto row = 6 * static_cast<Eigen::Index>(i);
    t.block<3, 4>(row, 0) = s_real;
    t.block<3, 4>(row + 3, 0) = s_dual;
    t.block<3, 4>(row + 3, 4) = s_real;
  }

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(t, Eigen::ComputeFullV);
  const auto sv = svd.singularValues();
  if (sv.size() < 8 || sv(5) <= 1e-10 * sv(0)) {
    throw DegenerateGeometryError("unobservable translation: hand-eye system is rank deficient");
  }
  const Eigen::Matrix<double, 8, 1> v1 = svd.matrixV().col(6);
  const Eigen::Matrix<double, 8, 1> v2 = svd.matrixV().col(7);
  const Eigen::Vector4d u1 = v1.head<4>(), w1 = v1.tail<4>();
  const Eigen::Vector4d u2 = v2.head<4>(), w2 = v2.tail<4>();

  // q = l1·v1 + l2·v2 subject to real·dual = 0 (homogeneous quadratic in l)
  // and ‖real‖ = 1.
  Eigen::Matrix2d m;
  m << u1.dot(w1), 0.5 * (u1.dot(w2) + u2.dot(w1)), 0.5 * (u1.dot(w2) + u2.dot(w1)), u2.dot(w2);
  Eigen::Matrix2d nrm;
  nrm << u1.dot(u1), u1.dot(u2), u1.dot(u2), u2.dot(u2);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
  const double e_lo = std::min(es.eigenvalues()(0), 0.0);
  const double e_hi = std::max(es.eigenvalues()(1), 0.0);
  const Eigen::Vector2d d_lo = es.eigenvectors().col(0), d_hi = es.eigenvectors().col(1);

  Eigen::Vector2d best = Eigen::Vector2d::Zero();
  double best_norm = -1.0;
  const double denom = e_hi - e_lo;
  for (const double sign : {1.0, -1.0}) {
    // e_lo·α² + e_hi·β² = 0 with α² + β² = 1
    const double alpha = denom > 0.0 ? std::sqrt(e_hi / denom) : 1.0;
    const double beta = denom > 0.0 ? std::sqrt(-e_lo / denom) : 0.0;
    const Eigen::Vector2d l = alpha * d_lo + sign * beta * d_hi;
    const double n = l.dot(nrm * l);
    if (n > best_norm) {
      best_norm = n;
      best = l;
    }
  }
  best /= std::sqrt(best_norm);
  const Eigen::Vector4d qr = best(0) * u1 + best(1) * u2;
  const Eigen::Vector4d qd = best(0) * w1 + best(1) * w2;

  const Eigen::Quaterniond real(qr(0), qr(1), qr(2), qr(3));
  const Eigen::Quaterniond dual(qd(0), qd(1), qd(2), qd(3));
  const Eigen::Quaterniond tq = dual * real.conjugate();
  const Pose x(Rotation(real), 2.0 * tq.vec());
  return hand_eye_residual(pairs, x);
}

}  // namespace evbench
