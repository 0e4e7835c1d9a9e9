#pragma once

#include <functional>

#include "dfuse/mesh.h"

namespace dfuse {

/// Zero level set of a scalar field sampled on a regular grid, triangulated
/// by splitting each cell into six tetrahedra sharing the main diagonal
/// (crack free across cells). Cells touching an invalid corner are skipped.
/// Vertices are deduplicated on grid edges; faces wind so the right-hand
/// normal points toward positive field values, and vertex normals follow
/// the interpolated field gradient (outward for a signed distance field).
TriMesh extract_isosurface(const Vec3& origin, double spacing, const Vec3i& dims,
                           const std::function<double(int, int, int)>& value,
                           const std::function<bool(int, int, int)>& valid);

}  // namespace dfuse
