#include "dfuse/body_model.h"

#include <cmath>
#include <stdexcept>

namespace dfuse {

void BodyModel::finalize() {
  const int N = vertex_count();
  const int K = kJoints;
  if (static_cast<int>(kinematic_parents.size()) != K)
    throw std::invalid_argument("body model: kinematic_parents must have 24 entries");
  if (joint_regressor.rows() != K || joint_regressor.cols() != N)
    throw std::invalid_argument("body model: joint_regressor must be K x N");
  if (skinning_weights.rows() != N || skinning_weights.cols() != K)
    throw std::invalid_argument("body model: skinning_weights must be N x K");
  if (shape_basis.rows() != 3 * N)
    throw std::invalid_argument("body model: shape_basis must have 3N rows");
  if (pose_basis.size() != 0 && pose_basis.rows() != 3 * N)
    throw std::invalid_argument("body model: pose_basis must have 3N rows");

  int roots = 0;
  for (int j = 0; j < K; ++j) {
    if (kinematic_parents[j] < 0)
      ++roots;
    else if (kinematic_parents[j] >= j)
      throw std::invalid_argument("body model: parents must precede children");
  }
  if (roots != 1) throw std::invalid_argument("body model: tree must have exactly one root");

  for (int i = 0; i < N; ++i) {
    const double s = skinning_weights.row(i).sum();
    if (std::abs(s - 1.0) > 1e-6 || skinning_weights.row(i).minCoeff() < -1e-12)
      throw std::invalid_argument("body model: skinning weight rows must be stochastic");
  }
  for (int j = 0; j < K; ++j) {
    if (std::abs(joint_regressor.row(j).sum() - 1.0) > 1e-6)
      throw std::invalid_argument("body model: joint regressor rows must sum to 1");
  }

  ancestors.assign(K, {});
  subtree.assign(K, std::vector<uint8_t>(K, 0));
  for (int j = 0; j < K; ++j) {
    std::vector<int> chain;
    for (int a = j; a >= 0; a = kinematic_parents[a]) chain.push_back(a);
    ancestors[j].assign(chain.rbegin(), chain.rend());
    for (int a : ancestors[j]) subtree[a][j] = 1;
  }

  joint_shape_dirs.resize(3 * K, shape_dim());
  for (int s = 0; s < shape_dim(); ++s) {
    for (int j = 0; j < K; ++j) {
      Vec3 d = Vec3::Zero();
      for (int i = 0; i < N; ++i) {
        d += joint_regressor(j, i) * Vec3(shape_basis(3 * i, s), shape_basis(3 * i + 1, s),
                                          shape_basis(3 * i + 2, s));
      }
      joint_shape_dirs.block<3, 1>(3 * j, s) = d;
    }
  }
}

void PoseParams::canonicalize() {
  for (int j = 0; j < BodyModel::kJoints; ++j) set_joint(j, canonicalize_axis_angle(joint(j)));
}

VecX pose_feature(const PoseParams& pose) {
  VecX feat(9 * (BodyModel::kJoints - 1));
  for (int j = 1; j < BodyModel::kJoints; ++j) {
    const Mat3 m = rodrigues(pose.joint(j)) - Mat3::Identity();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) feat[9 * (j - 1) + 3 * r + c] = m(r, c);
  }
  return feat;
}

std::vector<Vec3> shape_blend(const BodyModel& model, const ShapeParams& beta,
                              const PoseParams& theta, bool use_pose_blend) {
  if (beta.beta.size() != model.shape_dim())
    throw std::invalid_argument("shape_blend: beta length mismatch");
  if (theta.theta.size() != BodyModel::kPoseDim)
    throw std::invalid_argument("shape_blend: theta must have 75 entries");
  const int N = model.vertex_count();
  VecX offsets = VecX::Zero(3 * N);
  if (beta.beta.size() > 0) offsets = model.shape_basis * beta.beta;
  if (use_pose_blend && model.pose_basis_dim() > 0) {
    offsets += model.pose_basis * pose_feature(theta);
  }
  std::vector<Vec3> out(N);
  for (int i = 0; i < N; ++i) {
    out[i] = model.template_vertices[i] + Vec3(offsets[3 * i], offsets[3 * i + 1], offsets[3 * i + 2]);
  }
  return out;
}

std::vector<Vec3> joint_locations(const BodyModel& model, const ShapeParams& beta) {
  const auto verts = shape_blend(model, beta, PoseParams(), false);
  std::vector<Vec3> joints(BodyModel::kJoints);
  for (int j = 0; j < BodyModel::kJoints; ++j) {
    Vec3 p = Vec3::Zero();
    for (int i = 0; i < model.vertex_count(); ++i) p += model.joint_regressor(j, i) * verts[i];
    joints[j] = p;
  }
  return joints;
}

FkResult forward_kinematics(const BodyModel& model, const ShapeParams& beta,
                            const PoseParams& theta) {
  const int K = BodyModel::kJoints;
  FkResult fk;
  fk.rest_joints = joint_locations(model, beta);
  fk.bone_world.resize(K);
  fk.skin_transforms.resize(K);
  fk.posed_joints.resize(K);
  fk.parent_world_rot.resize(K);
  for (int j = 0; j < K; ++j) {
    Rigid local;
    local.R = rodrigues(theta.joint(j));
    const int par = model.kinematic_parents[j];
    if (par < 0) {
      local.t = fk.rest_joints[j] + theta.translation();
      fk.parent_world_rot[j] = Mat3::Identity();
      fk.bone_world[j] = local;
    } else {
      local.t = fk.rest_joints[j] - fk.rest_joints[par];
      fk.parent_world_rot[j] = fk.bone_world[par].R;
      fk.bone_world[j] = fk.bone_world[par] * local;
    }
    fk.posed_joints[j] = fk.bone_world[j].t;
    fk.skin_transforms[j].R = fk.bone_world[j].R;
    fk.skin_transforms[j].t = fk.bone_world[j].t - fk.bone_world[j].R * fk.rest_joints[j];
  }
  return fk;
}

SkinnedMesh skin(const BodyModel& model, const ShapeParams& beta, const PoseParams& theta,
                 bool use_pose_blend) {
  const auto blended = shape_blend(model, beta, theta, use_pose_blend);
  const FkResult fk = forward_kinematics(model, beta, theta);

  TriMesh rest;
  rest.vertices = blended;
  rest.faces = model.faces;
  compute_vertex_normals(rest);

  const int N = model.vertex_count();
  SkinnedMesh out;
  out.vertices.resize(N);
  out.normals.resize(N);
  for (int i = 0; i < N; ++i) {
    Mat3 R = Mat3::Zero();
    Vec3 t = Vec3::Zero();
    for (int k = 0; k < BodyModel::kJoints; ++k) {
      const double w = model.skinning_weights(i, k);
      if (w == 0.0) continue;
      R += w * fk.skin_transforms[k].R;
      t += w * fk.skin_transforms[k].t;
    }
    out.vertices[i] = R * blended[i] + t;
    Vec3 n = polar_rotation(R) * rest.normals[i];
    const double len = n.norm();
    out.normals[i] = len > 1e-20 ? Vec3(n / len) : n;
  }
  return out;
}

MatX skin_jacobian(const BodyModel& model, const ShapeParams& beta, const PoseParams& theta,
                   bool use_pose_blend, const std::vector<int>& vertex_ids) {
  const int K = BodyModel::kJoints;
  const int S = model.shape_dim();
  const int cols = S + BodyModel::kPoseDim;
  const auto blended = shape_blend(model, beta, theta, use_pose_blend);
  const FkResult fk = forward_kinematics(model, beta, theta);

  // locals L_j and their rotation derivatives
  std::vector<Rigid> local(K);
  std::vector<std::array<Mat3, 3>> dlocal_rot(K);
  for (int j = 0; j < K; ++j) {
    local[j].R = rodrigues(theta.joint(j));
    const int par = model.kinematic_parents[j];
    local[j].t = par < 0 ? Vec3(fk.rest_joints[j] + theta.translation())
                         : Vec3(fk.rest_joints[j] - fk.rest_joints[par]);
    for (int c = 0; c < 3; ++c) dlocal_rot[j][c] = rodrigues_derivative(theta.joint(j), c);
  }

  // d(skin transform S_k)/d(theta_{j,c}) for every ancestor j of k:
  // prefix A_par(j) * dL_j * suffix(j -> k), then the rest-joint anchor.
  struct DRigid {
    Mat3 R = Mat3::Zero();
    Vec3 t = Vec3::Zero();
  };
  std::vector<std::vector<std::array<DRigid, 3>>> dskin_theta(K);
  for (int k = 0; k < K; ++k) {
    const auto& chain = model.ancestors[k];
    dskin_theta[k].resize(chain.size());
    for (std::size_t ci = 0; ci < chain.size(); ++ci) {
      const int j = chain[ci];
      const Rigid suffix = fk.bone_world[j].inverse() * fk.bone_world[k];
      const Mat3 Wpar = fk.parent_world_rot[j];
      for (int c = 0; c < 3; ++c) {
        const Mat3 dRj = Wpar * dlocal_rot[j][c];
        DRigid d;
        d.R = dRj * suffix.R;
        d.t = dRj * suffix.t;
        // anchor: S_k.t = A_k.t - A_k.R * J_k
        d.t -= d.R * fk.rest_joints[k];
        dskin_theta[k][ci][c] = d;
      }
    }
  }

  // d(skin transform S_k translation)/d(beta_s): rotations are beta free.
  // dA_k.t accumulates down the chain, then the anchor contributes.
  MatX dskin_t_beta(3 * K, S);  // per bone, d S_k.t / d beta
  for (int s = 0; s < S; ++s) {
    std::vector<Vec3> dA_t(K);
    for (int j = 0; j < K; ++j) {
      const int par = model.kinematic_parents[j];
      const Vec3 dJj = model.joint_shape_dirs.block<3, 1>(3 * j, s);
      if (par < 0) {
        dA_t[j] = dJj;
      } else {
        const Vec3 dJp = model.joint_shape_dirs.block<3, 1>(3 * par, s);
        dA_t[j] = fk.bone_world[par].R * (dJj - dJp) + dA_t[par];
      }
      dskin_t_beta.block<3, 1>(3 * j, s) =
          dA_t[j] - fk.bone_world[j].R * model.joint_shape_dirs.block<3, 1>(3 * j, s);
    }
  }

  MatX J = MatX::Zero(3 * static_cast<int>(vertex_ids.size()), cols);
  for (std::size_t vi = 0; vi < vertex_ids.size(); ++vi) {
    const int i = vertex_ids[vi];
    const Vec3 Ti = blended[i];
    auto block = J.middleRows<3>(3 * static_cast<int>(vi));
    for (int k = 0; k < K; ++k) {
      const double w = model.skinning_weights(i, k);
      if (w == 0.0) continue;
      // beta columns
      for (int s = 0; s < S; ++s) {
        const Vec3 bs(model.shape_basis(3 * i, s), model.shape_basis(3 * i + 1, s),
                      model.shape_basis(3 * i + 2, s));
        block.col(s) += w * (fk.skin_transforms[k].R * bs + dskin_t_beta.block<3, 1>(3 * k, s));
      }
      // theta columns through the kinematic chain
      const auto& chain = model.ancestors[k];
      for (std::size_t ci = 0; ci < chain.size(); ++ci) {
        const int j = chain[ci];
        for (int c = 0; c < 3; ++c) {
          const auto& d = dskin_theta[k][ci][c];
          block.col(S + 3 * j + c) += w * (d.R * Ti + d.t);
        }
      }
      // root translation
      block.block<3, 3>(0, S + 3 * K) += w * Mat3::Identity();
    }
    // pose blendshape offsets enter through the blended vertex
    if (use_pose_blend && model.pose_basis_dim() > 0) {
      Mat3 Rblend = Mat3::Zero();
      for (int k = 0; k < K; ++k) {
        const double w = model.skinning_weights(i, k);
        if (w != 0.0) Rblend += w * fk.skin_transforms[k].R;
      }
      for (int j = 1; j < K; ++j) {
        for (int c = 0; c < 3; ++c) {
          const Mat3 dR = rodrigues_derivative(theta.joint(j), c);
          Vec3 dTi = Vec3::Zero();
          for (int r = 0; r < 3; ++r)
            for (int cc = 0; cc < 3; ++cc) {
              const int feat_idx = 9 * (j - 1) + 3 * r + cc;
              dTi += dR(r, cc) * Vec3(model.pose_basis(3 * i, feat_idx),
                                      model.pose_basis(3 * i + 1, feat_idx),
                                      model.pose_basis(3 * i + 2, feat_idx));
            }
          block.col(S + 3 * j + c) += Rblend * dTi;
        }
      }
    }
  }
  return J;
}

TriMesh skinned_tri_mesh(const BodyModel& model, const ShapeParams& beta, const PoseParams& theta) {
  const SkinnedMesh sm = skin(model, beta, theta);
  TriMesh mesh;
  mesh.vertices = sm.vertices;
  mesh.normals = sm.normals;
  mesh.faces = model.faces;
  return mesh;
}

}  // namespace dfuse
