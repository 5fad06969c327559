#include "aerogen/pointcloud.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aerogen {

void LabeledPointCloud::append(const LabeledPointCloud& other) {
  positions.insert(positions.end(), other.positions.begin(), other.positions.end());
  semantic.insert(semantic.end(), other.semantic.begin(), other.semantic.end());
  instance.insert(instance.end(), other.instance.begin(), other.instance.end());
  if (has_colors() || other.has_colors()) {
    colors.resize(positions.size() - other.positions.size(), {0, 0, 0});
    if (other.has_colors())
      colors.insert(colors.end(), other.colors.begin(), other.colors.end());
    else
      colors.resize(positions.size(), {0, 0, 0});
  }
}

Aabb LabeledPointCloud::bounds() const {
  Aabb box;
  for (const Vec3& p : positions) box.expand(p);
  return box;
}

void LabeledPointCloud::validate() const {
  if (semantic.size() != positions.size() || instance.size() != positions.size())
    throw std::invalid_argument("cloud: parallel arrays differ in length");
  if (!colors.empty() && colors.size() != positions.size())
    throw std::invalid_argument("cloud: color array length mismatch");
  for (const Vec3& p : positions)
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
      throw std::invalid_argument("cloud: non-finite coordinate");
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

void save_cloud_ply(const LabeledPointCloud& cloud, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  bool rgb = cloud.has_colors();
  f << "ply\nformat binary_little_endian 1.0\n";
  f << "element vertex " << cloud.size() << "\n";
  f << "property double x\nproperty double y\nproperty double z\n";
  if (rgb) f << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  f << "property uchar semantic\nproperty uint instance\n";
  f << "end_header\n";
  for (size_t i = 0; i < cloud.size(); ++i) {
    write_raw(f, cloud.positions[i].x);
    write_raw(f, cloud.positions[i].y);
    write_raw(f, cloud.positions[i].z);
    if (rgb)
      for (int k = 0; k < 3; ++k) write_raw<uint8_t>(f, cloud.colors[i][k]);
    write_raw<uint8_t>(f, cloud.semantic[i]);
    write_raw<uint32_t>(f, cloud.instance[i]);
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

LabeledPointCloud load_cloud_ply(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::string line;
  std::getline(f, line);
  if (line != "ply") throw std::runtime_error(path + ": not a PLY file");
  size_t n = 0;
  bool rgb = false;
  while (std::getline(f, line) && line != "end_header") {
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    if (tok == "element") {
      std::string what;
      ss >> what >> n;
    } else if (tok == "property") {
      std::string type, name;
      ss >> type >> name;
      if (name == "red") rgb = true;
    }
  }
  LabeledPointCloud cloud;
  cloud.positions.resize(n);
  if (rgb) cloud.colors.resize(n);
  cloud.semantic.resize(n);
  cloud.instance.resize(n);
  for (size_t i = 0; i < n; ++i) {
    cloud.positions[i].x = read_raw<double>(f);
    cloud.positions[i].y = read_raw<double>(f);
    cloud.positions[i].z = read_raw<double>(f);
    if (rgb)
      for (int k = 0; k < 3; ++k) cloud.colors[i][k] = read_raw<uint8_t>(f);
    cloud.semantic[i] = read_raw<uint8_t>(f);
    cloud.instance[i] = read_raw<uint32_t>(f);
  }
  if (!f) throw std::runtime_error(path + ": truncated PLY payload");
  return cloud;
}

void save_cloud_txt(const LabeledPointCloud& cloud, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot write " + path);
  for (size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.positions[i];
    std::array<uint8_t, 3> c = cloud.has_colors() ? cloud.colors[i]
                                                  : std::array<uint8_t, 3>{0, 0, 0};
    std::fprintf(f, "%.6f %.6f %.6f %u %u %u %u %u\n", p.x, p.y, p.z,
                 unsigned{c[0]}, unsigned{c[1]}, unsigned{c[2]},
                 unsigned{cloud.semantic[i]}, unsigned{cloud.instance[i]});
  }
  if (std::fclose(f) != 0) throw std::runtime_error("write failed: " + path);
}

LabeledPointCloud load_cloud_txt(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  LabeledPointCloud cloud;
  double x, y, z;
  unsigned r, g, b, sem, inst;
  while (f >> x >> y >> z >> r >> g >> b >> sem >> inst) {
    cloud.push({x, y, z},
               {static_cast<uint8_t>(r), static_cast<uint8_t>(g), static_cast<uint8_t>(b)},
               static_cast<uint8_t>(sem), inst);
  }
  return cloud;
}

}  // namespace aerogen
