#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aerogen/annotate.hpp"
#include "aerogen/footprints.hpp"
#include "aerogen/recon.hpp"
#include "aerogen/scene.hpp"

namespace aerogen {

struct TerrainConfig {
  Vec2 extent{200.0, 200.0};
  double cell_size = 1.0;
  double relief_amplitude = 3.0;
  double ditch_rate = 0.0, bump_rate = 0.0;  // features per km
};

struct CityConfig {
  std::string geojson;  // when set, footprints/roads come from this file
  CityLayoutParams layout;
};

struct FlightConfig {
  double altitude = 60.0;
  double forward_overlap = 0.75, side_overlap = 0.75;
  double fov_deg = 60.0;  // horizontal
  int image_width = 320, image_height = 240;
  double wind_sigma_pos = 0.0, wind_sigma_ang = 0.0;
  double pitch_deg = -90.0;  // nadir default; fixed oblique optional
  double sun_azimuth = 0.0, fog_density = 0.0;  // metadata only
};

struct TransferConfig {
  TransferParams params;
  double proxy_grid = 0.0;  // optional proxy thinning spacing, 0 = off
};

struct PostprocessConfig {
  double downsample_spacing = 0.3;
  bool map_to_real6 = true;
  double tile_edge = 0.0;  // 0 = no tiling
};

struct EvalConfig {
  std::string gt_path, pred_path;  // point files (.txt or .ply)
  std::string taxonomy = "synthetic18";  // or "real6"
  std::string pred_instances;  // optional instance-prediction JSON
};

struct RunConfig {
  uint64_t seed = 1;
  std::string out_dir = "out";
  int workers = 0;  // 0 = hardware concurrency
  bool unsafe_params = false;

  TerrainConfig terrain;
  CityConfig city;
  std::vector<PlacementRule> placement;
  FlightConfig flight;
  NoiseParams noise;
  TransferConfig transfer;
  PostprocessConfig post;
  std::optional<EvalConfig> eval;

  void validate() const;  // throws std::invalid_argument
  int effective_workers() const;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::string& path);
  void save(const std::string& path) const;
};

}  // namespace aerogen
