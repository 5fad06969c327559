#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aerogen/camera.hpp"

namespace aerogen {

struct AoiRect {
  Vec2 lo, hi;
  bool empty() const { return hi.x <= lo.x || hi.y <= lo.y; }
};

struct FlightPlan {
  CameraIntrinsics intrinsics;
  std::vector<CameraPose> poses;
  double altitude = 0.0;  // above the z=0 reference plane
  double forward_overlap = 0.0, side_overlap = 0.0;
  double heading_first = 0.0, heading_second = M_PI / 2.0;
  // metadata only; retained so configs round-trip
  double sun_azimuth = 0.0, fog_density = 0.0;
};

// Crosshatch survey: a lawnmower pass at heading 0 and an identical pass at
// 90 degrees. Ground footprint per axis W = 2 * altitude * tan(half-FOV);
// along-track spacing W_y*(1-forward_overlap), cross-track W_x*(1-side_overlap).
FlightPlan plan_crosshatch(const AoiRect& aoi, double altitude, double forward_overlap,
                           double side_overlap, const CameraIntrinsics& intrinsics);

// Zero-mean Gaussian pose perturbation; deterministic per seed.
FlightPlan apply_wind_jitter(const FlightPlan& plan, uint64_t seed, double sigma_pos,
                             double sigma_ang);

// Nadir ground footprint of a pose, projected onto the z = ground_z plane from
// the image-corner rays. Returns 4 corners.
std::array<Vec2, 4> ground_footprint(const Camera& cam, double ground_z);

void save_flight_plan(const FlightPlan& plan, const std::string& path);
FlightPlan load_flight_plan(const std::string& path);

}  // namespace aerogen
