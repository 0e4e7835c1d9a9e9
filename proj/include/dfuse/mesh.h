#pragma once

#include <array>
#include <string>
#include <vector>

#include "dfuse/math_types.h"

namespace dfuse {

struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;  // per vertex, may be empty
  std::vector<std::array<int, 3>> faces;

  bool empty() const { return vertices.empty(); }
  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t face_count() const { return faces.size(); }
};

// Area-weighted per-vertex normals, unit length (zero rows stay zero).
void compute_vertex_normals(TriMesh& mesh);

double surface_area(const TriMesh& mesh);

// Undirected vertex adjacency with edge lengths, from face topology.
std::vector<std::vector<std::pair<int, double>>> build_edge_graph(const TriMesh& mesh);

// Connected components over the vertex graph; returns per-vertex label and
// writes the component count.
std::vector<int> connected_components(const TriMesh& mesh, int* count);

// V - E + F over unique undirected edges.
int euler_characteristic(const TriMesh& mesh);

// Unit-ish icosphere of the given radius; subdivisions >= 0.
TriMesh make_icosphere(double radius, int subdivisions, const Vec3& center = Vec3::Zero());

// Axis-aligned box with 12 triangles.
TriMesh make_box(const Vec3& half_extent, const Vec3& center = Vec3::Zero());

TriMesh transformed(const TriMesh& mesh, const Rigid& g);

void save_ply(const TriMesh& mesh, const std::string& path);
TriMesh load_ply(const std::string& path);

}  // namespace dfuse
