#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "aerogen/classes.hpp"
#include "aerogen/geom.hpp"

namespace aerogen {

// Triangle soup with per-triangle semantic / instance labels. Colors are
// payload only and never feed labeling logic.
struct LabeledMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<uint32_t, 3>> triangles;
  std::vector<uint8_t> tri_semantic;
  std::vector<uint32_t> tri_instance;                 // 0 = none
  std::vector<std::array<uint8_t, 3>> tri_color;

  size_t tri_count() const { return triangles.size(); }
  bool empty() const { return triangles.empty(); }

  Vec3 tri_vertex(size_t t, int k) const { return vertices[triangles[t][k]]; }
  double tri_area(size_t t) const;
  Vec3 tri_normal(size_t t) const;  // unit
  Aabb bounds() const;

  // Appends `other` translated/rotated/scaled; all its triangles take
  // `semantic_override` (255 = keep per-tri labels) and `instance`. Template
  // colors are scaled by `color_value_scale` (per-instance brightness jitter).
  void append(const LabeledMesh& other, const Vec3& position, double yaw, double scale,
              uint8_t semantic_override, uint32_t instance, double color_value_scale);

  void add_triangle(const Vec3& a, const Vec3& b, const Vec3& c, uint8_t semantic,
                    uint32_t instance, const std::array<uint8_t, 3>& color);

  // Checks index ranges, label consistency, degenerate triangles and the
  // instance-capable => instance > 0 invariant. Throws on violation.
  void validate() const;
};

// Binary little-endian PLY with per-face uchar semantic / uint instance /
// uchar rgb properties.
void save_mesh_ply(const LabeledMesh& mesh, const std::string& path);
LabeledMesh load_mesh_ply(const std::string& path);

}  // namespace aerogen
