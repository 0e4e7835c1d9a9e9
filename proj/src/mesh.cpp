#include "dfuse/mesh.h"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dfuse {

void compute_vertex_normals(TriMesh& mesh) {
  mesh.normals.assign(mesh.vertices.size(), Vec3::Zero());
  for (const auto& f : mesh.faces) {
    const Vec3& a = mesh.vertices[f[0]];
    const Vec3& b = mesh.vertices[f[1]];
    const Vec3& c = mesh.vertices[f[2]];
    const Vec3 n = (b - a).cross(c - a);  // area weighted
    mesh.normals[f[0]] += n;
    mesh.normals[f[1]] += n;
    mesh.normals[f[2]] += n;
  }
  for (auto& n : mesh.normals) {
    const double len = n.norm();
    if (len > 1e-20) n /= len;
  }
}

double surface_area(const TriMesh& mesh) {
  double area = 0.0;
  for (const auto& f : mesh.faces) {
    const Vec3 e1 = mesh.vertices[f[1]] - mesh.vertices[f[0]];
    const Vec3 e2 = mesh.vertices[f[2]] - mesh.vertices[f[0]];
    area += 0.5 * e1.cross(e2).norm();
  }
  return area;
}

std::vector<std::vector<std::pair<int, double>>> build_edge_graph(const TriMesh& mesh) {
  std::vector<std::vector<std::pair<int, double>>> adj(mesh.vertices.size());
  auto add = [&](int a, int b) {
    const double len = (mesh.vertices[a] - mesh.vertices[b]).norm();
    for (const auto& [n, d] : adj[a])
      if (n == b) return;
    adj[a].push_back({b, len});
    adj[b].push_back({a, len});
  };
  for (const auto& f : mesh.faces) {
    add(f[0], f[1]);
    add(f[1], f[2]);
    add(f[2], f[0]);
  }
  return adj;
}

std::vector<int> connected_components(const TriMesh& mesh, int* count) {
  const auto adj = build_edge_graph(mesh);
  std::vector<int> label(mesh.vertices.size(), -1);
  int comp = 0;
  std::vector<int> stack;
  for (std::size_t s = 0; s < label.size(); ++s) {
    if (label[s] != -1) continue;
    stack.push_back(static_cast<int>(s));
    label[s] = comp;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (const auto& [n, d] : adj[v]) {
        if (label[n] == -1) {
          label[n] = comp;
          stack.push_back(n);
        }
      }
    }
    ++comp;
  }
  if (count) *count = comp;
  return label;
}

int euler_characteristic(const TriMesh& mesh) {
  std::set<std::pair<int, int>> edges;
  for (const auto& f : mesh.faces) {
    for (int k = 0; k < 3; ++k) {
      int a = f[k], b = f[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      edges.insert({a, b});
    }
  }
  return static_cast<int>(mesh.vertices.size()) - static_cast<int>(edges.size()) +
         static_cast<int>(mesh.faces.size());
}

TriMesh make_icosphere(double radius, int subdivisions, const Vec3& center) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> verts = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
      {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (auto& v : verts) v.normalize();

  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 m = (verts[a] + verts[b]).normalized();
      verts.push_back(m);
      int idx = static_cast<int>(verts.size()) - 1;
      midpoint[key] = idx;
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces.swap(next);
  }

  TriMesh mesh;
  mesh.vertices.reserve(verts.size());
  for (const auto& v : verts) mesh.vertices.push_back(center + radius * v);
  mesh.faces = std::move(faces);
  compute_vertex_normals(mesh);
  return mesh;
}

TriMesh make_box(const Vec3& h, const Vec3& c) {
  TriMesh mesh;
  for (int i = 0; i < 8; ++i) {
    mesh.vertices.push_back(c + Vec3((i & 1) ? h.x() : -h.x(), (i & 2) ? h.y() : -h.y(),
                                     (i & 4) ? h.z() : -h.z()));
  }
  mesh.faces = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
                {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
  compute_vertex_normals(mesh);
  return mesh;
}

TriMesh transformed(const TriMesh& mesh, const Rigid& g) {
  TriMesh out = mesh;
  for (auto& v : out.vertices) v = g.apply(v);
  for (auto& n : out.normals) n = g.rotate(n);
  return out;
}

void save_ply(const TriMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  const bool has_normals = mesh.normals.size() == mesh.vertices.size();
  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << mesh.vertices.size() << "\n";
  out << "property float x\nproperty float y\nproperty float z\n";
  if (has_normals) out << "property float nx\nproperty float ny\nproperty float nz\n";
  out << "element face " << mesh.faces.size() << "\n";
  out << "property list uchar int vertex_indices\nend_header\n";
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec3& v = mesh.vertices[i];
    out << static_cast<float>(v.x()) << " " << static_cast<float>(v.y()) << " "
        << static_cast<float>(v.z());
    if (has_normals) {
      const Vec3& n = mesh.normals[i];
      out << " " << static_cast<float>(n.x()) << " " << static_cast<float>(n.y()) << " "
          << static_cast<float>(n.z());
    }
    out << "\n";
  }
  for (const auto& f : mesh.faces) out << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
}

TriMesh load_ply(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  std::size_t n_verts = 0, n_faces = 0;
  int props_per_vertex = 0;
  bool in_vertex_element = false;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    if (tok == "element") {
      std::string what;
      std::size_t n;
      ss >> what >> n;
      if (what == "vertex") {
        n_verts = n;
        in_vertex_element = true;
      } else {
        in_vertex_element = false;
        if (what == "face") n_faces = n;
      }
    } else if (tok == "property" && in_vertex_element) {
      std::string type;
      ss >> type;
      if (type != "list") ++props_per_vertex;
    } else if (tok == "end_header") {
      break;
    }
  }
  TriMesh mesh;
  mesh.vertices.resize(n_verts);
  const bool has_normals = props_per_vertex >= 6;
  if (has_normals) mesh.normals.resize(n_verts);
  for (std::size_t i = 0; i < n_verts; ++i) {
    std::getline(in, line);
    std::istringstream ss(line);
    ss >> mesh.vertices[i].x() >> mesh.vertices[i].y() >> mesh.vertices[i].z();
    if (has_normals) ss >> mesh.normals[i].x() >> mesh.normals[i].y() >> mesh.normals[i].z();
  }
  mesh.faces.resize(n_faces);
  for (std::size_t i = 0; i < n_faces; ++i) {
    std::getline(in, line);
    std::istringstream ss(line);
    int cnt;
    ss >> cnt >> mesh.faces[i][0] >> mesh.faces[i][1] >> mesh.faces[i][2];
  }
  return mesh;
}

}  // namespace dfuse
