#include "aerogen/flight.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "aerogen/rng.hpp"

namespace aerogen {

using nlohmann::json;

FlightPlan plan_crosshatch(const AoiRect& aoi, double altitude, double forward_overlap,
                           double side_overlap, const CameraIntrinsics& intrinsics) {
  intrinsics.validate();
  if (aoi.empty()) throw std::invalid_argument("plan_crosshatch: empty aoi");
  if (altitude <= 0.0) throw std::invalid_argument("plan_crosshatch: altitude must be > 0");
  for (double ov : {forward_overlap, side_overlap})
    if (ov < 0.0 || ov >= 1.0)
      throw std::invalid_argument("plan_crosshatch: overlap must be in [0,1)");

  FlightPlan plan;
  plan.intrinsics = intrinsics;
  plan.altitude = altitude;
  plan.forward_overlap = forward_overlap;
  plan.side_overlap = side_overlap;
  plan.heading_first = 0.0;
  plan.heading_second = M_PI / 2.0;

  // Nadir with yaw = flight heading: image x spans cross-track (W_x),
  // image y spans along-track (W_y).
  const double wx = altitude * intrinsics.width / intrinsics.focal;
  const double wy = altitude * intrinsics.height / intrinsics.focal;
  const double along = wy * (1.0 - forward_overlap);
  const double cross = wx * (1.0 - side_overlap);

  auto emit_pass = [&](double heading) {
    // flight lines run along `heading`; u = along-track, v = cross-track
    Vec2 dir{std::cos(heading), std::sin(heading)};
    Vec2 perp{-dir.y, dir.x};
    // project the aoi corners onto (dir, perp)
    double ulo = 1e300, uhi = -1e300, vlo = 1e300, vhi = -1e300;
    for (const Vec2& c : {aoi.lo, Vec2{aoi.hi.x, aoi.lo.y}, aoi.hi, Vec2{aoi.lo.x, aoi.hi.y}}) {
      double u = c.dot(dir), v = c.dot(perp);
      ulo = std::min(ulo, u); uhi = std::max(uhi, u);
      vlo = std::min(vlo, v); vhi = std::max(vhi, v);
    }
    size_t n_lines = static_cast<size_t>(std::ceil((vhi - vlo) / cross)) + 1;
    size_t n_shots = static_cast<size_t>(std::ceil((uhi - ulo) / along)) + 1;
    for (size_t li = 0; li < n_lines; ++li) {
      double v = vlo + static_cast<double>(li) * cross;
      bool reverse = (li % 2) == 1;  // serpentine
      for (size_t si = 0; si < n_shots; ++si) {
        size_t k = reverse ? n_shots - 1 - si : si;
        double u = ulo + static_cast<double>(k) * along;
        Vec2 p = dir * u + perp * v;
        CameraPose pose;
        pose.position = {p.x, p.y, altitude};
        pose.yaw = reverse ? heading + M_PI : heading;
        pose.pitch = -M_PI / 2.0;
        pose.roll = 0.0;
        plan.poses.push_back(pose);
      }
    }
  };

  emit_pass(plan.heading_first);
  emit_pass(plan.heading_second);
  return plan;
}

FlightPlan apply_wind_jitter(const FlightPlan& plan, uint64_t seed, double sigma_pos,
                             double sigma_ang) {
  if (sigma_pos < 0.0 || sigma_ang < 0.0)
    throw std::invalid_argument("apply_wind_jitter: sigmas must be >= 0");
  FlightPlan out = plan;
  Rng rng = Rng::stream(seed, "wind_jitter");
  for (CameraPose& pose : out.poses) {
    pose.position.x += rng.normal(0.0, sigma_pos);
    pose.position.y += rng.normal(0.0, sigma_pos);
    pose.position.z += rng.normal(0.0, sigma_pos);
    pose.yaw += rng.normal(0.0, sigma_ang);
    pose.pitch += rng.normal(0.0, sigma_ang);
    pose.roll += rng.normal(0.0, sigma_ang);
  }
  return out;
}

std::array<Vec2, 4> ground_footprint(const Camera& cam, double ground_z) {
  const auto& k = cam.intrinsics;
  std::array<Vec2, 4> corners;
  const double px[4] = {0.0, static_cast<double>(k.width), static_cast<double>(k.width), 0.0};
  const double py[4] = {0.0, 0.0, static_cast<double>(k.height), static_cast<double>(k.height)};
  for (int i = 0; i < 4; ++i) {
    Ray r = cam.pixel_ray(px[i], py[i]);
    if (std::abs(r.dir.z) < 1e-12)
      throw std::runtime_error("ground_footprint: ray parallel to ground");
    double t = (ground_z - r.origin.z) / r.dir.z;
    corners[i] = {r.origin.x + t * r.dir.x, r.origin.y + t * r.dir.y};
  }
  return corners;
}

namespace {

json pose_to_json(const CameraPose& p) {
  return {{"position", {p.position.x, p.position.y, p.position.z}},
          {"yaw", p.yaw}, {"pitch", p.pitch}, {"roll", p.roll}};
}

CameraPose pose_from_json(const json& j) {
  CameraPose p;
  p.position = {j.at("position").at(0), j.at("position").at(1), j.at("position").at(2)};
  p.yaw = j.at("yaw");
  p.pitch = j.at("pitch");
  p.roll = j.at("roll");
  return p;
}

}  // namespace

void save_flight_plan(const FlightPlan& plan, const std::string& path) {
  json j = {
      {"intrinsics", {{"width", plan.intrinsics.width}, {"height", plan.intrinsics.height},
                      {"focal", plan.intrinsics.focal}, {"cx", plan.intrinsics.cx},
                      {"cy", plan.intrinsics.cy}}},
      {"altitude", plan.altitude},
      {"forward_overlap", plan.forward_overlap},
      {"side_overlap", plan.side_overlap},
      {"headings", {plan.heading_first, plan.heading_second}},
      {"sun_azimuth", plan.sun_azimuth},
      {"fog_density", plan.fog_density},
  };
  json poses = json::array();
  for (const CameraPose& p : plan.poses) poses.push_back(pose_to_json(p));
  j["poses"] = std::move(poses);
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(1) << "\n";
}

FlightPlan load_flight_plan(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  json j = json::parse(f);
  FlightPlan plan;
  const auto& k = j.at("intrinsics");
  plan.intrinsics.width = k.at("width");
  plan.intrinsics.height = k.at("height");
  plan.intrinsics.focal = k.at("focal");
  plan.intrinsics.cx = k.at("cx");
  plan.intrinsics.cy = k.at("cy");
  plan.altitude = j.at("altitude");
  plan.forward_overlap = j.at("forward_overlap");
  plan.side_overlap = j.at("side_overlap");
  plan.heading_first = j.at("headings").at(0);
  plan.heading_second = j.at("headings").at(1);
  plan.sun_azimuth = j.value("sun_azimuth", 0.0);
  plan.fog_density = j.value("fog_density", 0.0);
  for (const auto& pj : j.at("poses")) plan.poses.push_back(pose_from_json(pj));
  return plan;
}

}  // namespace aerogen
