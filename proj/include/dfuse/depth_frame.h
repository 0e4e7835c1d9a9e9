#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dfuse/math_types.h"

namespace dfuse {

struct PinholeCamera {
  int width = 320;
  int height = 240;
  double fx = 260.0, fy = 260.0;
  double cx = 159.5, cy = 119.5;

  Vec3 unproject(double u, double v, double z) const {
    return Vec3((u - cx) / fx * z, (v - cy) / fy * z, z);
  }
  Vec2 project(const Vec3& p) const {
    return Vec2(fx * p.x() / p.z() + cx, fy * p.y() / p.z() + cy);
  }
  bool inside(double u, double v) const {
    return u >= 0.0 && v >= 0.0 && u <= width - 1.0 && v <= height - 1.0;
  }
};

/// Depth image in camera coordinates. depth == 0 marks invalid pixels.
/// Valid ranges are clipped to (min_depth, max_depth).
struct DepthFrame {
  PinholeCamera camera;
  std::vector<double> depth;       // meters, row major, w*h
  std::vector<Vec3> vertex_map;    // camera-frame points, zero rows invalid
  std::vector<Vec3> normal_map;    // unit normals where valid
  std::vector<uint8_t> valid;      // 1 where depth usable

  static constexpr double min_depth = 0.2;
  static constexpr double max_depth = 8.0;

  int width() const { return camera.width; }
  int height() const { return camera.height; }
  std::size_t size() const { return depth.size(); }
  double at(int x, int y) const { return depth[static_cast<std::size_t>(y) * camera.width + x]; }
  double& at(int x, int y) { return depth[static_cast<std::size_t>(y) * camera.width + x]; }

  void allocate() {
    depth.assign(static_cast<std::size_t>(camera.width) * camera.height, 0.0);
  }

  // Rebuild valid mask, vertex map and normal map from the depth image.
  // Normals come from cross products of the map gradients and face the
  // camera (negative z component).
  void compute_maps();

  std::size_t valid_count() const;
};

// Raw little-endian container: magic, w, h, intrinsics, then u16 millimeters.
void save_depth_raw(const DepthFrame& frame, const std::string& path);
DepthFrame load_depth_raw(const std::string& path);

}  // namespace dfuse
