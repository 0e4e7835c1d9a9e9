#include "dfuse/math_types.h"

#include <Eigen/SVD>
#include <cmath>

namespace dfuse {

Mat3 rodrigues(const Vec3& w) {
  const double theta = w.norm();
  if (theta < 1e-12) {
    // second order series keeps the result orthonormal to roundoff
    Mat3 K = skew(w);
    return Mat3::Identity() + K + 0.5 * K * K;
  }
  const Vec3 axis = w / theta;
  Mat3 K = skew(axis);
  return Mat3::Identity() + std::sin(theta) * K + (1.0 - std::cos(theta)) * K * K;
}

Vec3 so3_log(const Mat3& R) {
  const double tr = R.trace();
  double cos_theta = 0.5 * (tr - 1.0);
  cos_theta = std::min(1.0, std::max(-1.0, cos_theta));
  const double theta = std::acos(cos_theta);
  if (theta < 1e-10) {
    return unskew(R);  // R ~ I + [w]
  }
  if (theta > M_PI - 1e-6) {
    // antisymmetric part degenerates near pi; recover the axis from
    // (R + R^T)/2 = I + (1 - cos(theta)) (a a^T - I)
    Mat3 aaT =
        Mat3::Identity() + (0.5 * (R + R.transpose()) - Mat3::Identity()) / (1.0 - cos_theta);
    int k = 0;
    aaT.diagonal().maxCoeff(&k);
    Vec3 a = aaT.col(k);
    if (a.norm() < 1e-12) return Vec3::Zero();
    a.normalize();
    Vec3 w = a * theta;
    if ((rodrigues(w) - R).norm() > (rodrigues(-w) - R).norm()) w = -w;
    return w;
  }
  return unskew(R) * (theta / std::sin(theta));
}

Mat3 rodrigues_derivative(const Vec3& w, int i) {
  // Gallego & Yezzi closed form. Exact limit at w = 0: d exp/dw_i = [e_i].
  const double theta2 = w.squaredNorm();
  Vec3 ei = Vec3::Zero();
  ei[i] = 1.0;
  if (theta2 < 1e-16) {
    return skew(ei);
  }
  const Mat3 R = rodrigues(w);
  const Vec3 v = w.cross((Mat3::Identity() - R) * ei);
  return (skew(Vec3(w[i] * w)) + skew(v)) * R / theta2;
}

Mat3 so3_left_jacobian_inverse(const Vec3& w) {
  const double theta = w.norm();
  Mat3 K = skew(w);
  if (theta < 1e-8) {
    return Mat3::Identity() - 0.5 * K + (1.0 / 12.0) * K * K;
  }
  const double half = 0.5 * theta;
  const double cot_half = std::cos(half) / std::sin(half);
  const double coeff = (1.0 / (theta * theta)) * (1.0 - 0.5 * theta * cot_half);
  return Mat3::Identity() - 0.5 * K + coeff * K * K;
}

Vec3 canonicalize_axis_angle(const Vec3& w) {
  double theta = w.norm();
  if (theta < 2.0 * M_PI || theta < 1e-12) return w;
  const Vec3 axis = w / theta;
  theta = std::fmod(theta, 2.0 * M_PI);
  return axis * theta;
}

Mat3 polar_rotation(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 P = svd.matrixU() * svd.matrixV().transpose();
  if (P.determinant() < 0.0) {
    Mat3 D = Mat3::Identity();
    D(2, 2) = -1.0;
    P = svd.matrixU() * D * svd.matrixV().transpose();
  }
  return P;
}

Mat3 polar_rotation_derivative(const Mat3& m, const Mat3& dm) {
  // M = P S with S = P^T M symmetric. Writing dP = P [w] gives the
  // Sylvester relation [w] S + S [w] = 2 asym(P^T dM), and
  // [w] S + S [w] = [(tr(S) I - S) w] for symmetric S.
  const Mat3 P = polar_rotation(m);
  const Mat3 S = P.transpose() * m;
  const Mat3 A = P.transpose() * dm;
  const Mat3 asym = 0.5 * (A - A.transpose());
  const Vec3 rhs = 2.0 * Vec3(asym(2, 1), asym(0, 2), asym(1, 0));
  const Mat3 B = S.trace() * Mat3::Identity() - S;
  const Vec3 w = B.ldlt().solve(rhs);
  return P * skew(w);
}

Rigid twist_increment(const Vec3& v, const Vec3& omega, const Vec3& anchor) {
  Rigid g;
  g.R = rodrigues(omega);
  g.t = anchor - g.R * anchor + v;
  return g;
}

}  // namespace dfuse
