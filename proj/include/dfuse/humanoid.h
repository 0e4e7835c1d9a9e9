#pragma once

#include "dfuse/body_model.h"

namespace dfuse {

/// Procedurally generated low-poly humanoid for tests and demos.
///
/// Built in camera-style coordinates: y points down (head at negative y),
/// the body faces -z, arms out along x in the rest pose. Four shape modes:
/// 0 height, 1 girth, 2 limb length, 3 torso length. Pose blendshapes are
/// empty. Roughly 1k vertices from a capsule-union distance field.
BodyModel make_humanoid();

/// Standing pose with both shoulders rotated by `shoulder_angle` so the
/// arms drop from the rest T toward the body. All other joints zero.
PoseParams make_a_pose(double shoulder_angle = M_PI / 4.0);

}  // namespace dfuse
