#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "aerogen/kern/kernels.hpp"
#include "aerogen/mesh.hpp"

namespace aerogen {

// Binary BVH over mesh triangles, midpoint split on the longest centroid axis.
// Nearest-hit results match brute force exactly: the winner is the minimum of
// (t, original triangle index) lexicographically, so equal-t ties go to the
// lower original index no matter the traversal order.
class Bvh {
 public:
  static constexpr uint32_t kNoHit = 0xffffffffu;

  struct Hit {
    double t = std::numeric_limits<double>::infinity();
    uint32_t tri = kNoHit;  // original mesh triangle index
    bool valid() const { return tri != kNoHit; }
  };

  explicit Bvh(const LabeledMesh& mesh);  // throws on empty mesh

  Hit nearest(const Ray& ray, double tmin = 1e-9,
              double tmax = std::numeric_limits<double>::infinity()) const;

  // Any-hit segment test from a to b, t in (tmin, 1 - tmin) of the segment.
  bool occluded(const Vec3& a, const Vec3& b, double tmin = 1e-9) const;

  size_t node_count() const { return nodes_.size(); }
  size_t leaf_count() const { return leaf_count_; }

 private:
  struct Node {
    Aabb box;
    uint32_t left = 0, right = 0;   // children when count == 0
    uint32_t first = 0, count = 0;  // packed triangle range when leaf
  };

  uint32_t build(std::vector<uint32_t>& order, uint32_t begin, uint32_t end,
                 const std::vector<Aabb>& boxes, const std::vector<Vec3>& centroids);

  std::vector<Node> nodes_;
  kern::TriSoA tris_;                 // leaf-contiguous SoA pack
  std::vector<uint32_t> tri_index_;   // packed slot -> original triangle
  size_t leaf_count_ = 0;
};

}  // namespace aerogen
