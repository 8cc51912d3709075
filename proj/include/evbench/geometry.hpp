#pragma once

// Rigid-body math on SO(3)/SE(3): unit-quaternion rotations, poses, and the
// exponential/logarithm maps used by every trajectory metric.
//
// Conventions: quaternions are stored (w, x, y, z) and renormalized after
// every composition; twists are ordered (rho, phi) with rho the translational
// and phi the rotational part; the SE(3) logarithm is the exact closed form
// using the inverse of the left Jacobian V.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace evbench {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

inline Mat3 hat(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

class Rotation {
 public:
  Rotation() : q_(Eigen::Quaterniond::Identity()) {}

  /// Any non-zero quaternion; it is normalized on construction. Quaternions
  /// already unit to rounding are kept as is so normalization is idempotent.
  explicit Rotation(const Eigen::Quaterniond& q) : q_(q) {
    const double n2 = q.squaredNorm();
    if (!(n2 > 0.0)) throw std::invalid_argument("zero quaternion");
    if (std::abs(n2 - 1.0) > 4 * std::numeric_limits<double>::epsilon()) q_.normalize();
  }
  Rotation(double w, double x, double y, double z) : Rotation(Eigen::Quaterniond(w, x, y, z)) {}

  static Rotation identity() { return {}; }
  static Rotation from_matrix(const Mat3& r) { return Rotation(Eigen::Quaterniond(r)); }
  static Rotation about_axis(const Vec3& axis, double angle) {
    return Rotation(Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis.normalized())));
  }
  static Rotation rot_x(double a) { return about_axis(Vec3::UnitX(), a); }
  static Rotation rot_y(double a) { return about_axis(Vec3::UnitY(), a); }
  static Rotation rot_z(double a) { return about_axis(Vec3::UnitZ(), a); }

  /// Rotation vector -> rotation.
  static Rotation exp(const Vec3& phi) {
    const double theta = phi.norm();
    const double half = 0.5 * theta;
    // sin(theta/2)/theta, with its series near zero
    const double k = theta < 1e-8 ? 0.5 - theta * theta / 48.0 : std::sin(half) / theta;
    return Rotation(Eigen::Quaterniond(std::cos(half), k * phi.x(), k * phi.y(), k * phi.z()));
  }

  /// Principal rotation vector, ‖phi‖ ∈ [0, π].
  Vec3 log() const {
    Eigen::Quaterniond q = q_;
    if (q.w() < 0.0) q.coeffs() = -q.coeffs();
    const Vec3 v = q.vec();
    const double n = v.norm();
    if (n < 1e-8) {
      // 2 atan(n/w)/n ≈ (2/w)(1 - n²/(3w²))
      const double w = q.w();
      return (2.0 / w) * (1.0 - n * n / (3.0 * w * w)) * v;
    }
    return (2.0 * std::atan2(n, q.w()) / n) * v;
  }

  double angle() const { return log().norm(); }

  const Eigen::Quaterniond& quaternion() const { return q_; }
  double w() const { return q_.w(); }
  double x() const { return q_.x(); }
  double y() const { return q_.y(); }
  double z() const { return q_.z(); }

  Mat3 matrix() const { return q_.toRotationMatrix(); }
  Rotation inverse() const { return Rotation(q_.conjugate()); }
  Vec3 operator*(const Vec3& p) const { return q_ * p; }
  Rotation operator*(const Rotation& o) const { return Rotation(q_ * o.q_); }

  /// Shortest-arc spherical interpolation.
  Rotation slerp(const Rotation& to, double alpha) const { return Rotation(q_.slerp(alpha, to.q_)); }

  /// Exact comparison as rotations: q and -q are the same rotation.
  friend bool operator==(const Rotation& a, const Rotation& b) {
    return a.q_.coeffs() == b.q_.coeffs() || a.q_.coeffs() == -b.q_.coeffs();
  }

  bool is_approx(const Rotation& o, double tol) const { return (inverse() * o).angle() <= tol; }

 private:
  Eigen::Quaterniond q_;
};

/// se(3) element: rho is the translational part, phi the rotational part.
struct Twist {
  Vec3 rho = Vec3::Zero();
  Vec3 phi = Vec3::Zero();

  Vec6 vector() const {
    Vec6 v;
    v << rho, phi;
    return v;
  }
  static Twist from_vector(const Vec6& v) { return {v.head<3>(), v.tail<3>()}; }
  double norm() const { return vector().norm(); }
};

class Pose {
 public:
  Pose() : t_(Vec3::Zero()) {}
  Pose(const Rotation& r, const Vec3& t) : r_(r), t_(t) {}

  static Pose identity() { return {}; }
  static Pose from_translation(const Vec3& t) { return {Rotation(), t}; }
  static Pose from_rotation(const Rotation& r) { return {r, Vec3::Zero()}; }
  static Pose from_matrix(const Mat4& m) {
    return {Rotation::from_matrix(m.topLeftCorner<3, 3>()), m.topRightCorner<3, 1>()};
  }

  const Rotation& rotation() const { return r_; }
  const Vec3& translation() const { return t_; }

  Pose operator*(const Pose& o) const { return {r_ * o.r_, r_ * o.t_ + t_}; }
  Vec3 operator*(const Vec3& p) const { return r_ * p + t_; }
  Pose inverse() const {
    const Rotation ri = r_.inverse();
    return {ri, -(ri * t_)};
  }

  Mat4 matrix() const {
    Mat4 m = Mat4::Identity();
    m.topLeftCorner<3, 3>() = r_.matrix();
    m.topRightCorner<3, 1>() = t_;
    return m;
  }

  friend bool operator==(const Pose& a, const Pose& b) { return a.r_ == b.r_ && a.t_ == b.t_; }

 private:
  Rotation r_;
  Vec3 t_;
};

namespace detail {

// Coefficients of V = I + b·Φ + c·Φ² (left Jacobian of SO(3)).
inline void left_jacobian_coeffs(double theta, double& b, double& c) {
  const double t2 = theta * theta;
  if (theta < 1e-5) {
    b = 0.5 - t2 / 24.0;
    c = 1.0 / 6.0 - t2 / 120.0;
  } else {
    b = (1.0 - std::cos(theta)) / t2;
    c = (theta - std::sin(theta)) / (t2 * theta);
  }
}

// V⁻¹ = I - ½Φ + d·Φ².
inline double inverse_left_jacobian_coeff(double theta) {
  const double t2 = theta * theta;
  if (theta < 1e-5) return 1.0 / 12.0 + t2 / 720.0;
  return (1.0 - theta * std::sin(theta) / (2.0 * (1.0 - std::cos(theta)))) / t2;
}

}  // namespace detail

inline Pose exp_se3(const Twist& xi) {
  const Rotation r = Rotation::exp(xi.phi);
  double b = 0.0;
  double c = 0.0;
  detail::left_jacobian_coeffs(xi.phi.norm(), b, c);
  const Mat3 phi = hat(xi.phi);
  const Mat3 v = Mat3::Identity() + b * phi + c * phi * phi;
  return {r, v * xi.rho};
}

struct LogResult {
  Twist twist;
  /// False when the rotation angle is π (within 1e-12), where the principal value is not unique.
  bool unique = true;
};

inline LogResult log_se3_checked(const Pose& p) {
  LogResult out;
  out.twist.phi = p.rotation().log();
  const double theta = out.twist.phi.norm();
  out.unique = std::abs(theta - std::numbers::pi) > 1e-12;
  const Mat3 phi = hat(out.twist.phi);
  const Mat3 v_inv = Mat3::Identity() - 0.5 * phi + detail::inverse_left_jacobian_coeff(theta) * phi * phi;
  out.twist.rho = v_inv * p.translation();
  return out;
}

inline Twist log_se3(const Pose& p) { return log_se3_checked(p).twist; }

/// ‖log(P)∨‖₂ over the 6-vector (meters and radians mixed, unweighted).
inline double pose_norm(const Pose& p) { return log_se3(p).norm(); }

/// Rotation by shortest-arc slerp, translation linearly; alpha ∈ [0, 1].
inline Pose interpolate_pose(const Pose& a, const Pose& b, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("interpolation alpha outside [0, 1]");
  if (alpha == 0.0) return a;
  if (alpha == 1.0) return b;
  return {a.rotation().slerp(b.rotation(), alpha),
          (1.0 - alpha) * a.translation() + alpha * b.translation()};
}

}  // namespace evbench
