#pragma once

#include <cstdint>
#include <vector>

#include "aerogen/bvh.hpp"
#include "aerogen/flight.hpp"
#include "aerogen/pointcloud.hpp"
#include "aerogen/render.hpp"

namespace aerogen {

struct NoiseParams {
  double surface_sigma = 0.05;     // m, normal-direction Gaussian
  double outlier_rate = 0.002;     // fraction of kept points
  double outlier_radius = 5.0;     // m
  int min_views = 2;               // visibility threshold
  double density_per_view = 15.0;  // points / m^2 / view
  int view_cap = 4;                // views counted toward density
  double thin_dropout_width = 0.3; // m, per-instance bbox thinness
  double dropout_prob = 0.5;
  uint64_t seed = 1;

  void validate() const;
};

// Inverse-projects every hit pixel with the known camera parameters; labels
// come straight from the pixel. All images must share one intrinsics.
LabeledPointCloud backproject_proxy(const std::vector<DepthLabelImage>& images);

// Photogrammetry stand-in: area-uniform surface candidates, kept only when
// visible from >= min_views cameras, density scaled by the (capped) view
// count, normal-direction noise, thin-feature dropout, ball outliers.
// Output carries no labels. origin_tri, when non-null, receives the source
// triangle of each output point (diagnostics only).
LabeledPointCloud simulate_reconstruction(const LabeledMesh& mesh, const Bvh& bvh,
                                          const FlightPlan& plan, const NoiseParams& params,
                                          int workers = 1,
                                          std::vector<uint32_t>* origin_tri = nullptr);

}  // namespace aerogen
