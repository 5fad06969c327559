#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aerogen/pointcloud.hpp"

namespace aerogen {

// Total map from a source taxonomy onto a target taxonomy.
struct ClassMapping {
  std::string name;
  std::vector<std::string> source_names;  // index = source id
  std::vector<std::string> target_names;  // index = target id
  std::vector<uint8_t> table;             // source id -> target id

  uint8_t map(uint8_t src) const;                  // throws when unmapped
  bool surjective(std::vector<uint8_t>* unused = nullptr) const;

  // canonical mappings
  static ClassMapping synthetic18_to_real6();
  static ClassMapping instance14_to_reduced9();
};

// Plain-text two-column mapping files with '#'-comment headers.
void save_mapping(const ClassMapping& m, const std::string& path);
ClassMapping load_mapping(const std::string& path);

// One survivor per occupied voxel: the input point nearest the voxel centroid
// (ties to the lowest input index); semantic / instance by majority with ties
// to the smallest id. Voxel origin is the cloud's min corner.
LabeledPointCloud grid_downsample(const LabeledPointCloud& cloud, double spacing);

// Remaps labels in place; positions and count untouched. Classes present but
// unmapped raise an error naming the class.
LabeledPointCloud map_classes(const LabeledPointCloud& cloud, const ClassMapping& mapping);

struct Tile {
  LabeledPointCloud points;
  std::vector<uint32_t> source_indices;
  // bounds descriptor
  std::string kind;  // "block" | "sphere" | "fixed_count"
  Vec2 block_lo, block_hi;
  Vec3 center;
  double radius = 0.0;
  size_t requested = 0;
  bool padded = false;  // fixed-count sampling repeated points
};

// XY-partition into edge x edge blocks anchored at the min corner; the last
// block per axis absorbs the boundary so the tiling is exhaustive + disjoint.
std::vector<Tile> tile_blocks(const LabeledPointCloud& cloud, double edge);

// All points within `radius` of center (inclusive).
Tile sample_sphere(const LabeledPointCloud& cloud, const Vec3& center, double radius);

// The n nearest points to center; repeats nearest points (flagged) when the
// cloud holds fewer than n.
Tile sample_fixed_count(const LabeledPointCloud& cloud, const Vec3& center, size_t n);

// Exact per-class point counts.
std::map<uint8_t, size_t> class_histogram(const LabeledPointCloud& cloud);
void save_histogram_csv(const std::map<uint8_t, size_t>& hist,
                        const std::vector<std::string>& names, const std::string& path);

struct DensityRegion {
  std::string kind;  // "sphere" | "box"
  Vec3 center;       // sphere
  double radius = 0.0;
  Aabb box;          // box: sectional slabs along z
};

struct DensityHistogram {
  std::vector<double> bin_density;  // count / volume
  std::vector<size_t> bin_count;
  std::vector<double> bin_edge;     // outer radius (sphere) or upper z (box)
};

// Sphere: equal-volume radial shells. Box: equal-thickness z slabs.
DensityHistogram volume_density_histogram(const LabeledPointCloud& cloud,
                                          const DensityRegion& region, size_t bins);
void save_density_csv(const DensityHistogram& h, const std::string& path);

}  // namespace aerogen
