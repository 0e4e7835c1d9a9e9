#include "dfuse/depth_frame.h"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace dfuse {

void DepthFrame::compute_maps() {
  const int w = camera.width, h = camera.height;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  vertex_map.assign(n, Vec3::Zero());
  normal_map.assign(n, Vec3::Zero());
  valid.assign(n, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double d = at(x, y);
      if (d > min_depth && d < max_depth) {
        valid[y * w + x] = 1;
        vertex_map[y * w + x] = camera.unproject(x, y, d);
      }
    }
  }
  // central differences where both neighbors exist, forward/backward otherwise
  auto diff = [&](int x0, int y0, int x1, int y1) -> Vec3 {
    return vertex_map[y1 * w + x1] - vertex_map[y0 * w + x0];
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!valid[y * w + x]) continue;
      int xl = x > 0 && valid[y * w + x - 1] ? x - 1 : x;
      int xr = x < w - 1 && valid[y * w + x + 1] ? x + 1 : x;
      int yu = y > 0 && valid[(y - 1) * w + x] ? y - 1 : y;
      int yd = y < h - 1 && valid[(y + 1) * w + x] ? y + 1 : y;
      if (xl == xr || yu == yd) continue;
      const Vec3 dx = diff(xl, y, xr, y);
      const Vec3 dy = diff(x, yu, x, yd);
      Vec3 n = dx.cross(dy);
      const double len = n.norm();
      if (len < 1e-12) continue;
      n /= len;
      if (n.z() > 0) n = -n;  // face the camera
      normal_map[y * w + x] = n;
    }
  }
}

std::size_t DepthFrame::valid_count() const {
  std::size_t n = 0;
  for (uint8_t v : valid) n += v;
  return n;
}

namespace {
constexpr uint32_t kDepthMagic = 0x44464431;  // "DFD1"
}

void save_depth_raw(const DepthFrame& frame, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  const uint32_t w = frame.camera.width, h = frame.camera.height;
  out.write(reinterpret_cast<const char*>(&kDepthMagic), 4);
  out.write(reinterpret_cast<const char*>(&w), 4);
  out.write(reinterpret_cast<const char*>(&h), 4);
  const double intr[4] = {frame.camera.fx, frame.camera.fy, frame.camera.cx, frame.camera.cy};
  out.write(reinterpret_cast<const char*>(intr), sizeof(intr));
  std::vector<uint16_t> mm(frame.depth.size());
  for (std::size_t i = 0; i < frame.depth.size(); ++i) {
    double v = frame.depth[i] * 1000.0;
    mm[i] = v <= 0.0 ? 0 : static_cast<uint16_t>(std::min(v + 0.5, 65535.0));
  }
  out.write(reinterpret_cast<const char*>(mm.data()), mm.size() * sizeof(uint16_t));
}

DepthFrame load_depth_raw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  uint32_t magic = 0, w = 0, h = 0;
  in.read(reinterpret_cast<char*>(&magic), 4);
  if (magic != kDepthMagic) throw std::runtime_error("not a depth frame file: " + path);
  in.read(reinterpret_cast<char*>(&w), 4);
  in.read(reinterpret_cast<char*>(&h), 4);
  double intr[4];
  in.read(reinterpret_cast<char*>(intr), sizeof(intr));
  DepthFrame frame;
  frame.camera.width = static_cast<int>(w);
  frame.camera.height = static_cast<int>(h);
  frame.camera.fx = intr[0];
  frame.camera.fy = intr[1];
  frame.camera.cx = intr[2];
  frame.camera.cy = intr[3];
  std::vector<uint16_t> mm(static_cast<std::size_t>(w) * h);
  in.read(reinterpret_cast<char*>(mm.data()), mm.size() * sizeof(uint16_t));
  if (!in) throw std::runtime_error("truncated depth frame file: " + path);
  frame.depth.resize(mm.size());
  for (std::size_t i = 0; i < mm.size(); ++i) frame.depth[i] = mm[i] / 1000.0;
  frame.compute_maps();
  return frame;
}

}  // namespace dfuse
