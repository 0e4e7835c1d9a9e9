#pragma once

#include <functional>
#include <random>

#include "dfuse/math_types.h"

namespace dfuse::test {

inline std::mt19937& rng(uint32_t seed = 0) {
  static std::mt19937 gen(7u);
  if (seed != 0) gen.seed(seed);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Vec3 random_vec3(double scale = 1.0) {
  return Vec3(uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale));
}

inline Rigid random_rigid(double rot_scale = 1.0, double trans_scale = 0.5) {
  Rigid g;
  g.R = rodrigues(random_vec3(rot_scale));
  g.t = random_vec3(trans_scale);
  return g;
}

// Central-difference gradient of a scalar function.
inline VecX fd_gradient(const std::function<double(const VecX&)>& f, const VecX& x,
                        double h = 1e-6) {
  VecX g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    VecX xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

// Central-difference Jacobian of a vector function.
inline MatX fd_jacobian(const std::function<VecX(const VecX&)>& f, const VecX& x,
                        double h = 1e-6) {
  const VecX f0 = f(x);
  MatX J(f0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    VecX xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    J.col(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return J;
}

inline double rel_error(const VecX& a, const VecX& b) {
  const double denom = std::max(b.norm(), 1e-12);
  return (a - b).norm() / denom;
}

inline double rel_error(const MatX& a, const MatX& b) {
  const double denom = std::max(b.norm(), 1e-12);
  return (a - b).norm() / denom;
}

}  // namespace dfuse::test
