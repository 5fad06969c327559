#include "aerogen/camera.hpp"

#include <cmath>
#include <stdexcept>

namespace aerogen {

CameraIntrinsics CameraIntrinsics::from_hfov(int width, int height, double hfov_rad) {
  CameraIntrinsics k;
  k.width = width;
  k.height = height;
  k.focal = 0.5 * width / std::tan(0.5 * hfov_rad);
  k.cx = 0.5 * width;
  k.cy = 0.5 * height;
  return k;
}

void CameraIntrinsics::validate() const {
  if (width <= 0 || height <= 0 || focal <= 0.0)
    throw std::invalid_argument("intrinsics: width, height, focal must be > 0");
}

std::array<Vec3, 3> CameraPose::axes() const {
  // body = Rz(yaw) * Ry(-pitch) * Rx(roll); body axes = (forward, left, up)
  double cy = std::cos(yaw), sy = std::sin(yaw);
  double cp = std::cos(-pitch), sp = std::sin(-pitch);
  double cr = std::cos(roll), sr = std::sin(roll);

  // column k of the body rotation
  auto col = [&](int k) -> Vec3 {
    // Ry(-pitch) * Rx(roll)
    double m[3][3] = {
        {cp, sp * sr, sp * cr},
        {0.0, cr, -sr},
        {-sp, cp * sr, cp * cr},
    };
    Vec3 v{m[0][k], m[1][k], m[2][k]};
    return {cy * v.x - sy * v.y, sy * v.x + cy * v.y, v.z};
  };

  Vec3 forward = col(0), left = col(1), up = col(2);
  return {-left, -up, forward};  // image right, image down, view
}

Ray Camera::pixel_ray(double px, double py) const {
  auto [right, down, view] = pose.axes();
  double xc = (px - intrinsics.cx) / intrinsics.focal;
  double yc = (py - intrinsics.cy) / intrinsics.focal;
  Vec3 d = right * xc + down * yc + view;
  return {pose.position, d.normalized()};
}

bool Camera::project(const Vec3& p, double& px, double& py, double& depth) const {
  auto [right, down, view] = pose.axes();
  Vec3 rel = p - pose.position;
  double z = rel.dot(view);
  if (z <= 1e-9) return false;
  px = intrinsics.focal * rel.dot(right) / z + intrinsics.cx;
  py = intrinsics.focal * rel.dot(down) / z + intrinsics.cy;
  depth = z;
  return px >= 0.0 && px <= intrinsics.width && py >= 0.0 && py <= intrinsics.height;
}

}  // namespace aerogen
