#pragma once

#include <array>
#include <cstdint>

#include "aerogen/geom.hpp"

namespace aerogen {

struct CameraIntrinsics {
  int width = 0, height = 0;  // pixels
  double focal = 0.0;         // pixels
  double cx = 0.0, cy = 0.0;  // principal point, pixels

  static CameraIntrinsics from_hfov(int width, int height, double hfov_rad);
  void validate() const;
  double hfov() const { return 2.0 * std::atan(0.5 * width / focal); }
  double vfov() const { return 2.0 * std::atan(0.5 * height / focal); }
};

// Z-up right-handed world. yaw about +z (0 = +x), pitch about the body right
// axis (0 = level, -pi/2 = nadir), roll about the view axis.
struct CameraPose {
  Vec3 position;
  double yaw = 0.0, pitch = -M_PI / 2.0, roll = 0.0;

  // Columns: image-right, image-down, view direction (world frame).
  std::array<Vec3, 3> axes() const;
};

struct Camera {
  CameraIntrinsics intrinsics;
  CameraPose pose;

  // Unit world ray through the pixel center (px = i + 0.5 convention).
  Ray pixel_ray(double px, double py) const;
  // World point -> pixel; returns false when behind the camera or off-image.
  bool project(const Vec3& p, double& px, double& py, double& depth) const;
};

}  // namespace aerogen
