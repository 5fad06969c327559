#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aerogen/bvh.hpp"
#include "aerogen/camera.hpp"
#include "aerogen/mesh.hpp"

namespace aerogen {

// Per-pixel range / class / instance from one camera. depth +inf, semantic 255
// and instance 0 mark misses; the three stay consistent by construction.
struct DepthLabelImage {
  Camera camera;
  int width = 0, height = 0;
  std::vector<double> depth;
  std::vector<uint8_t> semantic;
  std::vector<uint32_t> instance;

  size_t pixel_count() const { return depth.size(); }
  bool hit(size_t i) const { return std::isfinite(depth[i]); }
  size_t hit_count() const;
  void validate() const;  // consistency invariant
};

// One primary ray per pixel center; nearest hit only, no shading.
DepthLabelImage render(const Camera& camera, const Bvh& bvh, const LabeledMesh& mesh,
                       int workers = 1);

// Binary container: magic, dims, camera block, float32 depth plane,
// uint8 semantic plane, uint32 instance plane.
void save_depth_label_image(const DepthLabelImage& img, const std::string& path);
DepthLabelImage load_depth_label_image(const std::string& path);

}  // namespace aerogen
