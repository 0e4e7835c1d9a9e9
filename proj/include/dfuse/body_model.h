#pragma once

#include <array>
#include <vector>

#include "dfuse/math_types.h"
#include "dfuse/mesh.h"

namespace dfuse {

/// Linear blend body model: template mesh, shape/pose blendshape bases,
/// joint regressor, kinematic tree and skinning weights.
///
/// Pose vector layout: 24 axis-angle triples (joint 0 is the root) followed
/// by 3 root translation components, 75 scalars total.
struct BodyModel {
  static constexpr int kJoints = 24;
  static constexpr int kPoseDim = kJoints * 3 + 3;

  std::vector<Vec3> template_vertices;          // N
  std::vector<std::array<int, 3>> faces;
  MatX shape_basis;                             // 3N x S, vertex-major rows (x,y,z per vertex)
  MatX pose_basis;                              // 3N x P, P = 9*(kJoints-1) or 0
  MatX joint_regressor;                         // K x N, rows sum to 1
  std::vector<int> kinematic_parents;           // K, root parent = -1
  MatX skinning_weights;                        // N x K, rows sum to 1

  // derived, filled by finalize()
  std::vector<std::vector<int>> ancestors;      // per joint, root..joint inclusive
  std::vector<std::vector<uint8_t>> subtree;    // subtree[j][k] = 1 if j is ancestor-or-self of k
  MatX joint_shape_dirs;                        // 3K x S, d(rest joints)/d(beta)

  int vertex_count() const { return static_cast<int>(template_vertices.size()); }
  int shape_dim() const { return static_cast<int>(shape_basis.cols()); }
  int pose_basis_dim() const { return static_cast<int>(pose_basis.cols()); }

  // Builds derived tables and checks the structural invariants
  // (row-stochastic weights and regressor, a single-root tree).
  void finalize();
};

struct ShapeParams {
  VecX beta;
  explicit ShapeParams(int dim = 0) : beta(VecX::Zero(dim)) {}
  explicit ShapeParams(VecX b) : beta(std::move(b)) {}
};

struct PoseParams {
  VecX theta;
  PoseParams() : theta(VecX::Zero(BodyModel::kPoseDim)) {}
  explicit PoseParams(VecX t) : theta(std::move(t)) {}

  Vec3 joint(int j) const { return theta.segment<3>(3 * j); }
  void set_joint(int j, const Vec3& w) { theta.segment<3>(3 * j) = w; }
  Vec3 translation() const { return theta.segment<3>(3 * BodyModel::kJoints); }
  void set_translation(const Vec3& t) { theta.segment<3>(3 * BodyModel::kJoints) = t; }

  // Wraps each joint axis-angle into [0, 2*pi).
  void canonicalize();
};

/// Forward kinematics output. skin_transforms map canonical rest-pose
/// points to posed points (identity at theta = 0).
struct FkResult {
  std::vector<Rigid> skin_transforms;   // per bone
  std::vector<Rigid> bone_world;        // rest-bone frame anchored at joints
  std::vector<Vec3> rest_joints;        // J(beta)
  std::vector<Vec3> posed_joints;
  std::vector<Mat3> parent_world_rot;   // world rotation of the parent chain
};

// Pose-rotation features: vectorized rotation matrices minus identity for
// the 23 non-root joints. Length 9*(kJoints-1).
VecX pose_feature(const PoseParams& pose);

// Template + shape offsets (+ pose offsets when use_pose_blend).
std::vector<Vec3> shape_blend(const BodyModel& model, const ShapeParams& beta,
                              const PoseParams& theta, bool use_pose_blend);

std::vector<Vec3> joint_locations(const BodyModel& model, const ShapeParams& beta);

FkResult forward_kinematics(const BodyModel& model, const ShapeParams& beta,
                            const PoseParams& theta);

struct SkinnedMesh {
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;
};

// Linear blend skinning of the blended template; normals carried by the
// polar rotation of each vertex's blended transform.
SkinnedMesh skin(const BodyModel& model, const ShapeParams& beta, const PoseParams& theta,
                 bool use_pose_blend = true);

// Full analytic Jacobian of skinned vertex positions with respect to
// [beta | joint axis-angles | root translation]; one 3x(S+75) block per
// requested vertex, stacked row-wise.
MatX skin_jacobian(const BodyModel& model, const ShapeParams& beta, const PoseParams& theta,
                   bool use_pose_blend, const std::vector<int>& vertex_ids);

TriMesh skinned_tri_mesh(const BodyModel& model, const ShapeParams& beta, const PoseParams& theta);

}  // namespace dfuse
