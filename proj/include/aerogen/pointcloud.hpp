#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "aerogen/classes.hpp"
#include "aerogen/geom.hpp"

namespace aerogen {

// Parallel-array point cloud. semantic 255 = unlabeled, instance 0 = none.
struct LabeledPointCloud {
  std::vector<Vec3> positions;
  std::vector<std::array<uint8_t, 3>> colors;  // optional: empty or same length
  std::vector<uint8_t> semantic;
  std::vector<uint32_t> instance;

  size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }
  bool has_colors() const { return !colors.empty(); }

  void push(const Vec3& p, uint8_t sem, uint32_t inst) {
    positions.push_back(p);
    semantic.push_back(sem);
    instance.push_back(inst);
  }

  void push(const Vec3& p, const std::array<uint8_t, 3>& rgb, uint8_t sem, uint32_t inst) {
    push(p, sem, inst);
    colors.push_back(rgb);
  }

  void append(const LabeledPointCloud& other);
  Aabb bounds() const;
  void validate() const;  // parallel lengths, finite coordinates
};

// Binary little-endian PLY, per-vertex double xyz + optional uchar rgb +
// uchar semantic + uint instance.
void save_cloud_ply(const LabeledPointCloud& cloud, const std::string& path);
LabeledPointCloud load_cloud_ply(const std::string& path);

// Whitespace text, one point per line: x y z r g b sem inst.
void save_cloud_txt(const LabeledPointCloud& cloud, const std::string& path);
LabeledPointCloud load_cloud_txt(const std::string& path);

}  // namespace aerogen
