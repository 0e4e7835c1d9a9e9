#pragma once

#include "dfuse/math_types.h"

namespace dfuse {

// Quaternions stored as (w, x, y, z) in a Vec4 so derivatives stay plain
// linear algebra.
namespace quat {

inline Vec4 identity() { return Vec4(1, 0, 0, 0); }

inline Vec4 mul(const Vec4& a, const Vec4& b) {
  return Vec4(a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
              a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
              a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
              a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]);
}

inline Vec4 conj(const Vec4& q) { return Vec4(q[0], -q[1], -q[2], -q[3]); }

inline Vec4 from_rotation(const Mat3& R) {
  Eigen::Quaterniond q(R);
  return Vec4(q.w(), q.x(), q.y(), q.z());
}

inline Mat3 to_rotation(const Vec4& q) {
  return Eigen::Quaterniond(q[0], q[1], q[2], q[3]).toRotationMatrix();
}

inline Vec4 pure(const Vec3& v) { return Vec4(0, v.x(), v.y(), v.z()); }

// Rotate a vector by a unit quaternion.
inline Vec3 rotate(const Vec4& q, const Vec3& x) {
  const Vec3 u(q[1], q[2], q[3]);
  const double w = q[0];
  return x + 2.0 * w * u.cross(x) + 2.0 * u.cross(u.cross(x));
}

// d(rotate(q, x))/dq as a 3x4 matrix, valid for unit q perturbed in any
// direction tangent or not (the caller keeps q unit to first order).
inline Eigen::Matrix<double, 3, 4> rotate_derivative(const Vec4& q, const Vec3& x) {
  const Vec3 u(q[1], q[2], q[3]);
  const double w = q[0];
  Eigen::Matrix<double, 3, 4> J;
  J.col(0) = 2.0 * u.cross(x);
  for (int j = 0; j < 3; ++j) {
    Vec3 e = Vec3::Zero();
    e[j] = 1.0;
    J.col(1 + j) = 2.0 * w * e.cross(x) + 2.0 * e.cross(u.cross(x)) + 2.0 * u.cross(e.cross(x));
  }
  return J;
}

}  // namespace quat

/// Unit dual quaternion encoding a rigid transform. real is unit,
/// real . dual = 0 for an exact rigid motion.
struct DualQuat {
  Vec4 real = quat::identity();
  Vec4 dual = Vec4::Zero();

  static DualQuat identity() { return DualQuat{}; }

  static DualQuat from_rigid(const Rigid& g) {
    DualQuat dq;
    dq.real = quat::from_rotation(g.R);
    dq.dual = 0.5 * quat::mul(quat::pure(g.t), dq.real);
    return dq;
  }

  Rigid to_rigid() const {
    const double n = real.norm();
    const Vec4 r = real / n;
    const Vec4 d = dual / n;
    Rigid g;
    g.R = quat::to_rotation(r);
    const Vec4 tq = quat::mul(d, quat::conj(r));
    g.t = 2.0 * Vec3(tq[1], tq[2], tq[3]);
    return g;
  }

  DualQuat operator*(const DualQuat& o) const {
    DualQuat out;
    out.real = quat::mul(real, o.real);
    out.dual = quat::mul(real, o.dual) + quat::mul(dual, o.real);
    return out;
  }

  DualQuat operator+(const DualQuat& o) const { return DualQuat{real + o.real, dual + o.dual}; }

  DualQuat scaled(double s) const { return DualQuat{real * s, dual * s}; }

  Vec3 transform_point(const Vec3& p) const { return to_rigid().apply(p); }
  Vec3 rotate_vector(const Vec3& v) const { return quat::rotate(real.normalized(), v); }

  // Compose a twist increment (v, omega) anchored at a point on the left.
  DualQuat premultiplied_twist(const Vec3& v, const Vec3& omega, const Vec3& anchor) const {
    return DualQuat::from_rigid(twist_increment(v, omega, anchor)) * (*this);
  }
};

/// Blend of weighted unit dual quaternions, sign-corrected to the
/// hemisphere of a pivot real part before summation.
struct DqBlend {
  DualQuat sum;      // raw weighted sum after sign correction
  double real_norm;  // |sum.real|

  Rigid transform() const {
    DualQuat n{sum.real / real_norm, sum.dual / real_norm};
    Rigid g;
    g.R = quat::to_rotation(n.real.normalized());
    const Vec4 tq = quat::mul(n.dual, quat::conj(n.real));
    g.t = 2.0 * Vec3(tq[1], tq[2], tq[3]);
    return g;
  }
};

}  // namespace dfuse
