#include "dfuse/humanoid.h"

#include <algorithm>
#include <cmath>

#include "dfuse/isosurface.h"

namespace dfuse {

namespace {

struct Capsule {
  Vec3 a, b;
  double radius;
  int bone;
};

double segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  double s = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return (p - (a + s * ab)).norm();
}

std::vector<Vec3> skeleton_joints() {
  std::vector<Vec3> j(BodyModel::kJoints);
  j[0] = {0.0, 0.0, 0.0};        // pelvis
  j[1] = {0.125, 0.06, 0.0};     // hips
  j[2] = {-0.125, 0.06, 0.0};
  j[3] = {0.0, -0.12, 0.0};      // spine
  j[4] = {0.125, 0.40, 0.0};     // knees
  j[5] = {-0.125, 0.40, 0.0};
  j[6] = {0.0, -0.23, 0.0};
  j[7] = {0.125, 0.70, 0.0};     // ankles
  j[8] = {-0.125, 0.70, 0.0};
  j[9] = {0.0, -0.33, 0.0};      // chest
  j[10] = {0.125, 0.745, -0.10}; // feet
  j[11] = {-0.125, 0.745, -0.10};
  j[12] = {0.0, -0.47, 0.0};     // neck
  j[13] = {0.08, -0.41, 0.0};    // collars
  j[14] = {-0.08, -0.41, 0.0};
  j[15] = {0.0, -0.55, 0.0};     // head
  j[16] = {0.18, -0.43, 0.0};    // shoulders
  j[17] = {-0.18, -0.43, 0.0};
  j[18] = {0.44, -0.43, 0.0};    // elbows
  j[19] = {-0.44, -0.43, 0.0};
  j[20] = {0.68, -0.43, 0.0};    // wrists
  j[21] = {-0.68, -0.43, 0.0};
  j[22] = {0.76, -0.43, 0.0};    // hands
  j[23] = {-0.76, -0.43, 0.0};
  return j;
}

std::vector<int> skeleton_parents() {
  return {-1, 0, 0, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 9, 9, 12, 13, 14, 16, 17, 18, 19, 20, 21};
}

std::vector<Capsule> body_capsules(const std::vector<Vec3>& j) {
  std::vector<Capsule> caps;
  auto add = [&](const Vec3& a, const Vec3& b, double r, int bone) {
    caps.push_back({a, b, r, bone});
  };
  add(j[0] + Vec3(0, 0.02, 0), j[3], 0.120, 0);  // torso stack
  add(j[3], j[6], 0.120, 3);
  add(j[6], j[9], 0.120, 6);
  add(j[9], j[12], 0.100, 9);
  add(j[12], j[15], 0.050, 12);                  // neck
  add(j[15], j[15] + Vec3(0, -0.09, 0), 0.090, 15);
  add(j[0], j[1], 0.095, 0);                     // hip bridge
  add(j[0], j[2], 0.095, 0);
  add(j[1], j[4], 0.056, 1);                     // thighs
  add(j[2], j[5], 0.056, 2);
  add(j[4], j[7], 0.052, 4);                     // calves
  add(j[5], j[8], 0.052, 5);
  add(j[7], j[10], 0.040, 7);                    // feet
  add(j[8], j[11], 0.040, 8);
  add(j[10], j[10] + Vec3(0, 0, -0.04), 0.035, 10);
  add(j[11], j[11] + Vec3(0, 0, -0.04), 0.035, 11);
  add(j[13], j[16], 0.060, 13);                  // collars
  add(j[14], j[17], 0.060, 14);
  add(j[16], j[18], 0.050, 16);                  // upper arms
  add(j[17], j[19], 0.050, 17);
  add(j[18], j[20], 0.043, 18);                  // forearms
  add(j[19], j[21], 0.043, 19);
  add(j[20], j[22] + Vec3(0.03, 0, 0), 0.037, 20);  // hands
  add(j[21], j[23] + Vec3(-0.03, 0, 0), 0.037, 21);
  return caps;
}

}  // namespace

BodyModel make_humanoid() {
  const auto joints = skeleton_joints();
  const auto caps = body_capsules(joints);

  auto sdf = [&](const Vec3& p) {
    double d = 1e9;
    for (const auto& c : caps) d = std::min(d, segment_distance(p, c.a, c.b) - c.radius);
    return d;
  };

  const double h = 0.045;
  const Vec3 origin(-0.88, -0.76, -0.22);
  const Vec3i dims(40, 36, 12);
  TriMesh mesh = extract_isosurface(
      origin, h, dims, [&](int x, int y, int z) { return sdf(Vec3(origin.x() + h * x, origin.y() + h * y, origin.z() + h * z)); },
      [](int, int, int) { return true; });

  const int N = static_cast<int>(mesh.vertices.size());
  const int K = BodyModel::kJoints;
  const int S = 4;

  BodyModel model;
  model.template_vertices = mesh.vertices;
  model.faces = mesh.faces;
  model.kinematic_parents = skeleton_parents();
  model.pose_basis.resize(3 * N, 0);

  // skinning from capsule proximity, top four bones per vertex
  model.skinning_weights = MatX::Zero(N, K);
  const double sigma_w = 0.03;
  for (int i = 0; i < N; ++i) {
    VecX score = VecX::Zero(K);
    VecX best = VecX::Constant(K, 1e9);
    for (const auto& c : caps) {
      const double d = std::max(segment_distance(mesh.vertices[i], c.a, c.b) - c.radius, 0.0);
      best[c.bone] = std::min(best[c.bone], d);
    }
    for (int k = 0; k < K; ++k)
      if (best[k] < 1e8) score[k] = std::exp(-(best[k] * best[k]) / (sigma_w * sigma_w));
    // keep the four largest
    std::vector<int> order(K);
    for (int k = 0; k < K; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return score[a] != score[b] ? score[a] > score[b] : a < b;
    });
    double sum = 0.0;
    for (int r = 0; r < 4; ++r) sum += score[order[r]];
    for (int r = 0; r < 4; ++r)
      if (sum > 0.0) model.skinning_weights(i, order[r]) = score[order[r]] / sum;
  }

  // joint regressor from gaussian weights around each rest joint
  model.joint_regressor = MatX::Zero(K, N);
  const double sigma_j = 0.05;
  for (int k = 0; k < K; ++k) {
    double sum = 0.0;
    for (int i = 0; i < N; ++i) {
      const double d2 = (mesh.vertices[i] - joints[k]).squaredNorm();
      const double w = std::exp(-d2 / (2.0 * sigma_j * sigma_j));
      model.joint_regressor(k, i) = w;
      sum += w;
    }
    model.joint_regressor.row(k) /= sum;
  }

  // shape modes: height, girth (inflation along normals), limb length,
  // torso length
  model.shape_basis = MatX::Zero(3 * N, S);
  for (int i = 0; i < N; ++i) {
    const Vec3& v = mesh.vertices[i];
    const Vec3& n = mesh.normals[i];
    const Vec3 height(0.0, 0.10 * v.y(), 0.0);
    const Vec3 girth = 0.04 * n;
    Vec3 limb = Vec3::Zero();
    if (std::abs(v.x()) > 0.18) limb.x() = (std::abs(v.x()) - 0.18) * 0.15 * (v.x() > 0 ? 1 : -1);
    if (v.y() > 0.06) limb.y() = (v.y() - 0.06) * 0.15;
    const double torso_f = std::clamp((0.06 - v.y()) / 0.53, 0.0, 1.0);
    const Vec3 torso(0.0, -0.12 * torso_f, 0.0);
    const Vec3 modes[4] = {height, girth, limb, torso};
    for (int s = 0; s < S; ++s) model.shape_basis.block<3, 1>(3 * i, s) = modes[s];
  }

  model.finalize();
  return model;
}

PoseParams make_a_pose(double shoulder_angle) {
  PoseParams pose;
  pose.set_joint(16, Vec3(0, 0, shoulder_angle));
  pose.set_joint(17, Vec3(0, 0, -shoulder_angle));
  return pose;
}

}  // namespace dfuse
