#include <doctest.h>

#include "dfuse/body_model.h"
#include "dfuse/humanoid.h"
#include "dfuse/model_io.h"
#include "test_util.h"

using namespace dfuse;

namespace {

// Small random but structurally valid model, with a dense pose basis so the
// pose-blend code paths get exercised.
BodyModel make_random_model(int N, int S, int P, uint32_t seed) {
  test::rng(seed);
  BodyModel model;
  model.template_vertices.resize(N);
  for (auto& v : model.template_vertices) v = test::random_vec3(0.5);
  model.shape_basis = MatX::Zero(3 * N, S);
  for (int i = 0; i < 3 * N; ++i)
    for (int s = 0; s < S; ++s) model.shape_basis(i, s) = test::uniform(-0.05, 0.05);
  model.pose_basis = MatX::Zero(3 * N, P);
  for (int i = 0; i < 3 * N; ++i)
    for (int p = 0; p < P; ++p) model.pose_basis(i, p) = test::uniform(-0.01, 0.01);
  model.joint_regressor = MatX::Zero(BodyModel::kJoints, N);
  for (int j = 0; j < BodyModel::kJoints; ++j) {
    for (int i = 0; i < N; ++i) model.joint_regressor(j, i) = test::uniform(0.01, 1.0);
    model.joint_regressor.row(j) /= model.joint_regressor.row(j).sum();
  }
  model.kinematic_parents = {-1, 0, 0, 0, 1, 2, 3, 4,  5,  6,  7,  8,
                             9,  9, 9, 12, 13, 14, 16, 17, 18, 19, 20, 21};
  model.skinning_weights = MatX::Zero(N, BodyModel::kJoints);
  for (int i = 0; i < N; ++i) {
    for (int r = 0; r < 4; ++r) {
      const int k = static_cast<int>(test::uniform(0, BodyModel::kJoints - 1e-9));
      model.skinning_weights(i, k) += test::uniform(0.1, 1.0);
    }
    model.skinning_weights.row(i) /= model.skinning_weights.row(i).sum();
  }
  model.finalize();
  return model;
}

}  // namespace

TEST_CASE("shape_blend basics") {
  const BodyModel model = make_random_model(40, 3, 9 * 23, 100);

  SUBCASE("zero coefficients give the template") {
    const auto out = shape_blend(model, ShapeParams(3), PoseParams(), true);
    for (int i = 0; i < model.vertex_count(); ++i)
      CHECK((out[i] - model.template_vertices[i]).norm() == doctest::Approx(0.0));
  }

  SUBCASE("unit beta adds the first basis column") {
    ShapeParams beta(3);
    beta.beta[0] = 1.0;
    const auto out = shape_blend(model, beta, PoseParams(), false);
    for (int i = 0; i < model.vertex_count(); ++i) {
      const Vec3 expect = model.template_vertices[i] +
                          Vec3(model.shape_basis(3 * i, 0), model.shape_basis(3 * i + 1, 0),
                               model.shape_basis(3 * i + 2, 0));
      CHECK((out[i] - expect).norm() < 1e-15);
    }
  }

  SUBCASE("random beta matches the summation oracle") {
    test::rng(101);
    ShapeParams beta(3);
    for (int s = 0; s < 3; ++s) beta.beta[s] = test::uniform(-2, 2);
    const auto out = shape_blend(model, beta, PoseParams(), false);
    for (int i = 0; i < model.vertex_count(); ++i) {
      Vec3 expect = model.template_vertices[i];
      for (int s = 0; s < 3; ++s)
        expect += beta.beta[s] * Vec3(model.shape_basis(3 * i, s), model.shape_basis(3 * i + 1, s),
                                      model.shape_basis(3 * i + 2, s));
      CHECK((out[i] - expect).norm() < 1e-14);
    }
  }

  SUBCASE("dimension mismatch throws") {
    CHECK_THROWS_AS(shape_blend(model, ShapeParams(5), PoseParams(), false), std::invalid_argument);
  }
}

TEST_CASE("joint_locations") {
  const BodyModel model = make_random_model(40, 3, 0, 102);

  SUBCASE("beta zero applies the regressor to the template") {
    const auto joints = joint_locations(model, ShapeParams(3));
    for (int j = 0; j < BodyModel::kJoints; ++j) {
      Vec3 expect = Vec3::Zero();
      for (int i = 0; i < model.vertex_count(); ++i)
        expect += model.joint_regressor(j, i) * model.template_vertices[i];
      CHECK((joints[j] - expect).norm() < 1e-14);
    }
  }

  SUBCASE("one-hot regressor row selects a vertex") {
    BodyModel m2 = make_random_model(40, 3, 0, 103);
    m2.joint_regressor.row(5).setZero();
    m2.joint_regressor(5, 7) = 1.0;
    m2.finalize();
    const auto joints = joint_locations(m2, ShapeParams(3));
    CHECK((joints[5] - m2.template_vertices[7]).norm() < 1e-15);
  }

  SUBCASE("random beta matches the dense multiply oracle") {
    test::rng(104);
    ShapeParams beta(3);
    for (int s = 0; s < 3; ++s) beta.beta[s] = test::uniform(-2, 2);
    const auto blended = shape_blend(model, beta, PoseParams(), false);
    const auto joints = joint_locations(model, beta);
    for (int j = 0; j < BodyModel::kJoints; ++j) {
      Vec3 expect = Vec3::Zero();
      for (int i = 0; i < model.vertex_count(); ++i)
        expect += model.joint_regressor(j, i) * blended[i];
      CHECK((joints[j] - expect).norm() < 1e-13);
    }
  }
}

TEST_CASE("forward kinematics") {
  const BodyModel model = make_random_model(60, 2, 0, 105);

  SUBCASE("rest pose gives identity skin transforms") {
    const FkResult fk = forward_kinematics(model, ShapeParams(2), PoseParams());
    for (int k = 0; k < BodyModel::kJoints; ++k) {
      CHECK((fk.skin_transforms[k].R - Mat3::Identity()).norm() < 1e-14);
      CHECK(fk.skin_transforms[k].t.norm() < 1e-14);
      CHECK((fk.posed_joints[k] - fk.rest_joints[k]).norm() < 1e-14);
    }
  }

  SUBCASE("root-only rotation rotates every bone about the root joint") {
    PoseParams pose;
    const double phi = 0.7;
    pose.set_joint(0, Vec3(0, 0, phi));
    const FkResult fk = forward_kinematics(model, ShapeParams(2), pose);
    const Mat3 R = rodrigues(Vec3(0, 0, phi));
    const Vec3 root = fk.rest_joints[0];
    for (int k = 0; k < BodyModel::kJoints; ++k) {
      CHECK((fk.skin_transforms[k].R - R).norm() < 1e-12);
      const Vec3 expect_t = root - R * root;
      CHECK((fk.skin_transforms[k].t - expect_t).norm() < 1e-12);
    }
  }

  SUBCASE("random pose matches an explicit homogeneous matrix chain") {
    test::rng(106);
    PoseParams pose;
    for (int j = 0; j < BodyModel::kJoints; ++j) pose.set_joint(j, test::random_vec3(0.6));
    pose.set_translation(Vec3(0.1, -0.2, 0.3));
    const FkResult fk = forward_kinematics(model, ShapeParams(2), pose);
    const auto rest = joint_locations(model, ShapeParams(2));

    for (int k = 0; k < BodyModel::kJoints; ++k) {
      // walk the chain with explicit 4x4 products
      Mat4 A = Mat4::Identity();
      std::vector<int> chain;
      for (int a = k; a >= 0; a = model.kinematic_parents[a]) chain.push_back(a);
      std::reverse(chain.begin(), chain.end());
      for (int j : chain) {
        Mat4 L = Mat4::Identity();
        L.topLeftCorner<3, 3>() = rodrigues(pose.joint(j));
        const int par = model.kinematic_parents[j];
        L.topRightCorner<3, 1>() =
            par < 0 ? Vec3(rest[j] + pose.translation()) : Vec3(rest[j] - rest[par]);
        A = A * L;
      }
      Mat4 anchor = Mat4::Identity();
      anchor.topRightCorner<3, 1>() = -rest[k];
      const Mat4 S = A * anchor;
      CHECK((fk.skin_transforms[k].R - S.topLeftCorner<3, 3>()).norm() < 1e-12);
      CHECK((fk.skin_transforms[k].t - S.topRightCorner<3, 1>()).norm() < 1e-12);
    }
  }
}

TEST_CASE("skin") {
  const BodyModel model = make_random_model(50, 2, 0, 107);

  SUBCASE("rest pose returns the blended mesh") {
    test::rng(108);
    ShapeParams beta(2);
    beta.beta << 0.3, -0.8;
    const auto blended = shape_blend(model, beta, PoseParams(), true);
    const auto posed = skin(model, beta, PoseParams());
    for (int i = 0; i < model.vertex_count(); ++i)
      CHECK((posed.vertices[i] - blended[i]).norm() < 1e-13);
  }

  SUBCASE("single-bone vertex follows its bone rigidly") {
    BodyModel m2 = make_random_model(50, 2, 0, 109);
    m2.skinning_weights.row(3).setZero();
    m2.skinning_weights(3, 4) = 1.0;
    m2.finalize();
    PoseParams pose;
    pose.set_joint(4, Vec3(0.5, 0.2, -0.1));
    pose.set_joint(1, Vec3(-0.3, 0.4, 0.2));
    const FkResult fk = forward_kinematics(m2, ShapeParams(2), pose);
    const auto posed = skin(m2, ShapeParams(2), pose);
    const Vec3 expect = fk.skin_transforms[4].apply(m2.template_vertices[3]);
    CHECK((posed.vertices[3] - expect).norm() < 1e-13);
  }

  SUBCASE("random pose matches the dense LBS oracle") {
    test::rng(110);
    PoseParams pose;
    for (int j = 0; j < BodyModel::kJoints; ++j) pose.set_joint(j, test::random_vec3(0.5));
    pose.set_translation(test::random_vec3(0.2));
    ShapeParams beta(2);
    beta.beta << -0.5, 1.1;
    const auto blended = shape_blend(model, beta, pose, true);
    const FkResult fk = forward_kinematics(model, beta, pose);
    const auto posed = skin(model, beta, pose);
    for (int i = 0; i < model.vertex_count(); ++i) {
      Mat4 T = Mat4::Zero();
      for (int k = 0; k < BodyModel::kJoints; ++k) {
        Mat4 G = Mat4::Identity();
        G.topLeftCorner<3, 3>() = fk.skin_transforms[k].R;
        G.topRightCorner<3, 1>() = fk.skin_transforms[k].t;
        T += model.skinning_weights(i, k) * G;
      }
      const Vec4 h = T * Vec4(blended[i].x(), blended[i].y(), blended[i].z(), 1.0);
      CHECK((posed.vertices[i] - h.head<3>()).norm() < 1e-12);
    }
  }

  SUBCASE("skinning is linear in the bone transforms") {
    // convex combination of two poses' transforms = combination of results
    test::rng(111);
    PoseParams pose_a, pose_b;
    for (int j = 0; j < BodyModel::kJoints; ++j) {
      pose_a.set_joint(j, test::random_vec3(0.4));
      pose_b.set_joint(j, test::random_vec3(0.4));
    }
    const FkResult fka = forward_kinematics(model, ShapeParams(2), pose_a);
    const FkResult fkb = forward_kinematics(model, ShapeParams(2), pose_b);
    const double alpha = 0.3;
    const int i = 17;
    const Vec3 v = model.template_vertices[i];
    Vec3 mixed = Vec3::Zero(), pa = Vec3::Zero(), pb = Vec3::Zero();
    for (int k = 0; k < BodyModel::kJoints; ++k) {
      const double w = model.skinning_weights(i, k);
      const Mat3 Rm = alpha * fka.skin_transforms[k].R + (1 - alpha) * fkb.skin_transforms[k].R;
      const Vec3 tm = alpha * fka.skin_transforms[k].t + (1 - alpha) * fkb.skin_transforms[k].t;
      mixed += w * (Rm * v + tm);
      pa += w * fka.skin_transforms[k].apply(v);
      pb += w * fkb.skin_transforms[k].apply(v);
    }
    CHECK((mixed - (alpha * pa + (1 - alpha) * pb)).norm() < 1e-13);
  }
}

TEST_CASE("whole-body rigid invariance through the root") {
  const BodyModel model = make_humanoid();
  const ShapeParams beta(model.shape_dim());
  PoseParams pose;
  pose.set_joint(0, Vec3(0.4, -0.3, 0.8));
  pose.set_translation(Vec3(0.05, 0.1, -0.2));

  const auto rest = skin(model, beta, PoseParams());
  const auto posed = skin(model, beta, pose);
  const FkResult fk = forward_kinematics(model, beta, pose);
  const Rigid root = fk.skin_transforms[0];
  for (int i = 0; i < model.vertex_count(); i += 37) {
    CHECK((posed.vertices[i] - root.apply(rest.vertices[i])).norm() < 1e-9);
  }
}

TEST_CASE("skin jacobian matches finite differences at random configurations") {
  const BodyModel model = make_random_model(25, 3, 9 * 23, 112);
  const int S = model.shape_dim();
  test::rng(113);

  const std::vector<int> ids = {0, 7, 19};
  for (int trial = 0; trial < 20; ++trial) {
    ShapeParams beta(S);
    for (int s = 0; s < S; ++s) beta.beta[s] = test::uniform(-1.5, 1.5);
    PoseParams pose;
    for (int j = 0; j < BodyModel::kJoints; ++j) pose.set_joint(j, test::random_vec3(0.5));
    pose.set_translation(test::random_vec3(0.3));
    const bool use_pose_blend = trial % 2 == 0;

    const MatX J = skin_jacobian(model, beta, pose, use_pose_blend, ids);

    VecX x(S + BodyModel::kPoseDim);
    x.head(S) = beta.beta;
    x.tail(BodyModel::kPoseDim) = pose.theta;
    const auto f = [&](const VecX& v) -> VecX {
      ShapeParams b(VecX(v.head(S)));
      PoseParams p(VecX(v.tail(BodyModel::kPoseDim)));
      const auto posed = skin(model, b, p, use_pose_blend);
      VecX out(3 * ids.size());
      for (std::size_t q = 0; q < ids.size(); ++q) out.segment<3>(3 * q) = posed.vertices[ids[q]];
      return out;
    };
    const MatX fd = test::fd_jacobian(f, x, 1e-6);
    CHECK(test::rel_error(J, fd) < 1e-4);
  }
}

TEST_CASE("humanoid model is structurally sound and round trips through files") {
  const BodyModel model = make_humanoid();
  CHECK(model.vertex_count() > 500);
  CHECK(model.vertex_count() < 4000);
  CHECK(model.shape_dim() == 4);

  // connected mesh
  TriMesh mesh;
  mesh.vertices = model.template_vertices;
  mesh.faces = model.faces;
  int comps = 0;
  connected_components(mesh, &comps);
  CHECK(comps == 1);

  const double area = surface_area(mesh);
  CHECK(area > 1.0);
  CHECK(area < 2.5);

  // file round trip, binary and json
  save_model(model, "/tmp/dfuse_model_test.bin");
  const BodyModel loaded = load_model("/tmp/dfuse_model_test.bin");
  CHECK(loaded.vertex_count() == model.vertex_count());
  CHECK((loaded.skinning_weights - model.skinning_weights).norm() == doctest::Approx(0.0));
  CHECK((loaded.shape_basis - model.shape_basis).norm() == doctest::Approx(0.0));

  save_model(model, "/tmp/dfuse_model_test.json");
  const BodyModel loaded_json = load_model("/tmp/dfuse_model_test.json");
  CHECK(loaded_json.vertex_count() == model.vertex_count());
  CHECK((loaded_json.joint_regressor - model.joint_regressor).norm() < 1e-12);
}
