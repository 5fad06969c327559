#include "aerogen/mesh.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aerogen {

double LabeledMesh::tri_area(size_t t) const {
  Vec3 a = tri_vertex(t, 0), b = tri_vertex(t, 1), c = tri_vertex(t, 2);
  return 0.5 * (b - a).cross(c - a).norm();
}

Vec3 LabeledMesh::tri_normal(size_t t) const {
  Vec3 a = tri_vertex(t, 0), b = tri_vertex(t, 1), c = tri_vertex(t, 2);
  return (b - a).cross(c - a).normalized();
}

Aabb LabeledMesh::bounds() const {
  Aabb box;
  for (const Vec3& v : vertices) box.expand(v);
  return box;
}

void LabeledMesh::add_triangle(const Vec3& a, const Vec3& b, const Vec3& c,
                               uint8_t semantic, uint32_t instance,
                               const std::array<uint8_t, 3>& color) {
  uint32_t base = static_cast<uint32_t>(vertices.size());
  vertices.push_back(a);
  vertices.push_back(b);
  vertices.push_back(c);
  triangles.push_back({base, base + 1, base + 2});
  tri_semantic.push_back(semantic);
  tri_instance.push_back(instance);
  tri_color.push_back(color);
}

void LabeledMesh::append(const LabeledMesh& other, const Vec3& position, double yaw,
                         double scale, uint8_t semantic_override, uint32_t instance,
                         double color_value_scale) {
  double cy = std::cos(yaw), sy = std::sin(yaw);
  uint32_t base = static_cast<uint32_t>(vertices.size());
  for (const Vec3& v : other.vertices) {
    Vec3 s = v * scale;
    vertices.push_back({position.x + cy * s.x - sy * s.y,
                        position.y + sy * s.x + cy * s.y,
                        position.z + s.z});
  }
  auto tint = [&](uint8_t c) {
    return static_cast<uint8_t>(std::clamp(c * color_value_scale, 0.0, 255.0));
  };
  for (size_t t = 0; t < other.tri_count(); ++t) {
    const auto& tr = other.triangles[t];
    triangles.push_back({base + tr[0], base + tr[1], base + tr[2]});
    tri_semantic.push_back(semantic_override == classes::kUnlabeled
                               ? other.tri_semantic[t]
                               : semantic_override);
    tri_instance.push_back(instance);
    const auto& c = other.tri_color[t];
    tri_color.push_back({tint(c[0]), tint(c[1]), tint(c[2])});
  }
}

void LabeledMesh::validate() const {
  size_t nt = triangles.size();
  if (tri_semantic.size() != nt || tri_instance.size() != nt || tri_color.size() != nt)
    throw std::invalid_argument("mesh: per-triangle arrays out of sync");
  for (size_t t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k)
      if (triangles[t][k] >= vertices.size())
        throw std::invalid_argument("mesh: vertex index out of range");
    if (tri_area(t) <= 0.0)
      throw std::invalid_argument("mesh: degenerate triangle " + std::to_string(t));
    if (classes::instance_capable(tri_semantic[t]) && tri_instance[t] == 0)
      throw std::invalid_argument("mesh: instance-capable triangle without instance id");
  }
  for (const Vec3& v : vertices)
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z))
      throw std::invalid_argument("mesh: non-finite vertex");
}

namespace {

template <typename T>
void write_raw(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void save_mesh_ply(const LabeledMesh& mesh, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "ply\nformat binary_little_endian 1.0\n";
  f << "element vertex " << mesh.vertices.size() << "\n";
  f << "property double x\nproperty double y\nproperty double z\n";
  f << "element face " << mesh.tri_count() << "\n";
  f << "property list uchar uint vertex_indices\n";
  f << "property uchar semantic\nproperty uint instance\n";
  f << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  f << "end_header\n";
  for (const Vec3& v : mesh.vertices) {
    write_raw(f, v.x);
    write_raw(f, v.y);
    write_raw(f, v.z);
  }
  for (size_t t = 0; t < mesh.tri_count(); ++t) {
    write_raw<uint8_t>(f, 3);
    for (int k = 0; k < 3; ++k) write_raw<uint32_t>(f, mesh.triangles[t][k]);
    write_raw<uint8_t>(f, mesh.tri_semantic[t]);
    write_raw<uint32_t>(f, mesh.tri_instance[t]);
    for (int k = 0; k < 3; ++k) write_raw<uint8_t>(f, mesh.tri_color[t][k]);
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

LabeledMesh load_mesh_ply(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::string line;
  std::getline(f, line);
  if (line != "ply") throw std::runtime_error(path + ": not a PLY file");
  size_t n_vert = 0, n_face = 0;
  while (std::getline(f, line) && line != "end_header") {
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    if (tok == "element") {
      std::string what;
      size_t count;
      ss >> what >> count;
      if (what == "vertex") n_vert = count;
      else if (what == "face") n_face = count;
    }
  }
  LabeledMesh mesh;
  mesh.vertices.resize(n_vert);
  for (Vec3& v : mesh.vertices) {
    v.x = read_raw<double>(f);
    v.y = read_raw<double>(f);
    v.z = read_raw<double>(f);
  }
  mesh.triangles.resize(n_face);
  mesh.tri_semantic.resize(n_face);
  mesh.tri_instance.resize(n_face);
  mesh.tri_color.resize(n_face);
  for (size_t t = 0; t < n_face; ++t) {
    uint8_t n = read_raw<uint8_t>(f);
    if (n != 3) throw std::runtime_error(path + ": non-triangle face");
    for (int k = 0; k < 3; ++k) mesh.triangles[t][k] = read_raw<uint32_t>(f);
    mesh.tri_semantic[t] = read_raw<uint8_t>(f);
    mesh.tri_instance[t] = read_raw<uint32_t>(f);
    for (int k = 0; k < 3; ++k) mesh.tri_color[t][k] = read_raw<uint8_t>(f);
  }
  if (!f) throw std::runtime_error(path + ": truncated PLY payload");
  return mesh;
}

}  // namespace aerogen
