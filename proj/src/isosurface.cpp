#include "dfuse/isosurface.h"

#include <cstdint>
#include <unordered_map>

namespace dfuse {

namespace {

// Kuhn decomposition: six tetrahedra sharing the 0-7 diagonal. Corner bit
// layout: bit0 = x, bit1 = y, bit2 = z.
constexpr int kTets[6][4] = {{0, 4, 6, 7}, {0, 2, 6, 7}, {0, 4, 5, 7},
                             {0, 1, 5, 7}, {0, 2, 3, 7}, {0, 1, 3, 7}};

struct EdgeKey {
  int64_t a, b;
  bool operator==(const EdgeKey& o) const { return a == o.a && b == o.b; }
};

struct EdgeKeyHash {
  std::size_t operator()(const EdgeKey& k) const {
    return std::hash<int64_t>()(k.a * 1000003 ^ k.b);
  }
};

}  // namespace

TriMesh extract_isosurface(const Vec3& origin, double h, const Vec3i& dims,
                           const std::function<double(int, int, int)>& value,
                           const std::function<bool(int, int, int)>& valid) {
  TriMesh mesh;
  if (dims.x() < 2 || dims.y() < 2 || dims.z() < 2) return mesh;

  std::unordered_map<EdgeKey, int, EdgeKeyHash> edge_vertex;
  std::vector<Vec3> vertex_gradients;

  auto corner_index = [&](int x, int y, int z) -> int64_t {
    return (static_cast<int64_t>(z) * dims.y() + y) * dims.x() + x;
  };
  auto corner_pos = [&](int x, int y, int z) {
    return Vec3(origin.x() + h * x, origin.y() + h * y, origin.z() + h * z);
  };
  // central differences with one-sided fallback next to invalid corners
  auto gradient_at = [&](int x, int y, int z) {
    Vec3 g = Vec3::Zero();
    const int c[3] = {x, y, z};
    for (int a = 0; a < 3; ++a) {
      int lo[3] = {x, y, z}, hi[3] = {x, y, z};
      lo[a] = std::max(0, c[a] - 1);
      hi[a] = std::min(dims[a] - 1, c[a] + 1);
      if (!valid(lo[0], lo[1], lo[2])) lo[a] = c[a];
      if (!valid(hi[0], hi[1], hi[2])) hi[a] = c[a];
      if (lo[a] == hi[a]) continue;
      g[a] = (value(hi[0], hi[1], hi[2]) - value(lo[0], lo[1], lo[2])) / (h * (hi[a] - lo[a]));
    }
    return g;
  };

  int cx[8], cy[8], cz[8];
  double val[8];
  int64_t gid[8];

  for (int z = 0; z + 1 < dims.z(); ++z) {
    for (int y = 0; y + 1 < dims.y(); ++y) {
      for (int x = 0; x + 1 < dims.x(); ++x) {
        bool all_valid = true;
        bool any_neg = false, any_pos = false;
        for (int c = 0; c < 8; ++c) {
          cx[c] = x + (c & 1);
          cy[c] = y + ((c >> 1) & 1);
          cz[c] = z + ((c >> 2) & 1);
          if (!valid(cx[c], cy[c], cz[c])) {
            all_valid = false;
            break;
          }
          val[c] = value(cx[c], cy[c], cz[c]);
          gid[c] = corner_index(cx[c], cy[c], cz[c]);
          (val[c] < 0 ? any_neg : any_pos) = true;
        }
        if (!all_valid || !any_neg || !any_pos) continue;

        for (const auto& tet : kTets) {
          int neg[4], pos[4];
          int n_neg = 0, n_pos = 0;
          for (int t = 0; t < 4; ++t) {
            if (val[tet[t]] < 0)
              neg[n_neg++] = tet[t];
            else
              pos[n_pos++] = tet[t];
          }
          if (n_neg == 0 || n_neg == 4) continue;

          auto edge_point = [&](int a, int b) -> int {
            EdgeKey key{std::min(gid[a], gid[b]), std::max(gid[a], gid[b])};
            auto it = edge_vertex.find(key);
            if (it != edge_vertex.end()) return it->second;
            const double va = val[a], vb = val[b];
            const double s = va / (va - vb);
            const Vec3 pa = corner_pos(cx[a], cy[a], cz[a]);
            const Vec3 pb = corner_pos(cx[b], cy[b], cz[b]);
            mesh.vertices.push_back(pa + s * (pb - pa));
            const Vec3 ga = gradient_at(cx[a], cy[a], cz[a]);
            const Vec3 gb = gradient_at(cx[b], cy[b], cz[b]);
            vertex_gradients.push_back(ga + s * (gb - ga));
            const int idx = static_cast<int>(mesh.vertices.size()) - 1;
            edge_vertex.emplace(key, idx);
            return idx;
          };

          // outward direction used to fix the winding
          Vec3 to_positive = Vec3::Zero();
          for (int t = 0; t < n_pos; ++t) to_positive += corner_pos(cx[pos[t]], cy[pos[t]], cz[pos[t]]);
          to_positive /= n_pos;
          Vec3 from_negative = Vec3::Zero();
          for (int t = 0; t < n_neg; ++t)
            from_negative += corner_pos(cx[neg[t]], cy[neg[t]], cz[neg[t]]);
          from_negative /= n_neg;
          const Vec3 dir = to_positive - from_negative;

          auto emit = [&](int i0, int i1, int i2) {
            if (i0 == i1 || i1 == i2 || i0 == i2) return;
            const Vec3 n = (mesh.vertices[i1] - mesh.vertices[i0])
                               .cross(mesh.vertices[i2] - mesh.vertices[i0]);
            if (n.dot(dir) >= 0)
              mesh.faces.push_back({i0, i1, i2});
            else
              mesh.faces.push_back({i0, i2, i1});
          };

          if (n_neg == 1) {
            emit(edge_point(neg[0], pos[0]), edge_point(neg[0], pos[1]), edge_point(neg[0], pos[2]));
          } else if (n_neg == 3) {
            emit(edge_point(neg[0], pos[0]), edge_point(neg[1], pos[0]), edge_point(neg[2], pos[0]));
          } else {
            const int v00 = edge_point(neg[0], pos[0]);
            const int v01 = edge_point(neg[0], pos[1]);
            const int v11 = edge_point(neg[1], pos[1]);
            const int v10 = edge_point(neg[1], pos[0]);
            emit(v00, v01, v11);
            emit(v00, v11, v10);
          }
        }
      }
    }
  }

  mesh.normals.resize(mesh.vertices.size());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const double len = vertex_gradients[i].norm();
    mesh.normals[i] = len > 1e-12 ? Vec3(vertex_gradients[i] / len) : Vec3::Zero();
  }
  // fall back to face normals where the field gradient vanished
  bool need_fallback = false;
  for (const auto& n : mesh.normals)
    if (n.squaredNorm() < 0.25) need_fallback = true;
  if (need_fallback) {
    TriMesh tmp = mesh;
    compute_vertex_normals(tmp);
    for (std::size_t i = 0; i < mesh.normals.size(); ++i)
      if (mesh.normals[i].squaredNorm() < 0.25) mesh.normals[i] = tmp.normals[i];
  }
  return mesh;
}

}  // namespace dfuse
