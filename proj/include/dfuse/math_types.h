#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace dfuse {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat66 = Eigen::Matrix<double, 6, 6>;
using Mat36 = Eigen::Matrix<double, 3, 6>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using Vec3i = Eigen::Vector3i;

inline Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

inline Vec3 unskew(const Mat3& m) {
  return Vec3(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)) * 0.5;
}

/// Rigid transform x -> R*x + t. Composition and inversion stay in SO(3)
/// up to roundoff; no projective parts.
struct Rigid {
  Mat3 R = Mat3::Identity();
  Vec3 t = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return R * p + t; }
  Vec3 rotate(const Vec3& v) const { return R * v; }

  Rigid operator*(const Rigid& o) const { return Rigid{R * o.R, R * o.t + t}; }

  Rigid inverse() const {
    Rigid r;
    r.R = R.transpose();
    r.t = -(r.R * t);
    return r;
  }

  static Rigid identity() { return Rigid{}; }
};

// Axis-angle <-> rotation matrix (Rodrigues).
Mat3 rodrigues(const Vec3& axis_angle);

// Inverse of rodrigues; returns axis-angle with norm in [0, pi].
Vec3 so3_log(const Mat3& R);

// dR/d(axis_angle component i) at the given axis-angle vector.
// Closed form, exact also at the origin.
Mat3 rodrigues_derivative(const Vec3& axis_angle, int i);

// Inverse of the left Jacobian of SO(3): maps a left-multiplied
// rotation increment omega to the change in axis-angle coordinates,
// d(log(exp([omega]) exp([theta])))/d omega at omega = 0.
Mat3 so3_left_jacobian_inverse(const Vec3& axis_angle);

// Wrap an axis-angle vector so its norm lies in [0, 2*pi).
Vec3 canonicalize_axis_angle(const Vec3& axis_angle);

// Nearest rotation to M in Frobenius norm (polar factor).
Mat3 polar_rotation(const Mat3& m);

// Derivative of polar_rotation along a direction dM: returns dP.
Mat3 polar_rotation_derivative(const Mat3& m, const Mat3& dm);

// Twist (v, omega) applied as a left increment anchored at point a:
// x -> a + exp([omega]) (x - a) + v. Returns the rigid transform.
Rigid twist_increment(const Vec3& v, const Vec3& omega, const Vec3& anchor);

}  // namespace dfuse
