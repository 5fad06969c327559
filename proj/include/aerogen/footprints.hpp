#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aerogen/geom.hpp"

namespace aerogen {

struct BuildingFootprint {
  std::vector<Vec2> ring;  // closed, CCW, not repeated at the end
  double height = 0.0;
  std::string style = "flat";  // flat | gable, optionally with "_win" suffix

  void validate(size_t index) const;  // throws with the footprint index
};

struct RoadSegment {
  std::vector<Vec2> polyline;
  double width = 0.0;
};

struct RoadNetwork {
  std::vector<RoadSegment> segments;

  void validate() const;
  double total_length() const;
  // Distance from p to the nearest centerline.
  double distance_to_centerline(const Vec2& p) const;
};

// GeoJSON-compatible ingestion: Polygon features with a `height` property
// (optional `style`) become footprints; LineString features with `width`
// become road segments.
void load_geojson(const std::string& path, std::vector<BuildingFootprint>& footprints,
                  RoadNetwork& roads);
void save_geojson(const std::string& path, const std::vector<BuildingFootprint>& footprints,
                  const RoadNetwork& roads);

struct CityLayoutParams {
  int building_count = 20;
  double road_pitch = 60.0;       // spacing of the road grid, m
  double road_width = 8.0;
  double min_building_edge = 8.0;
  double max_building_edge = 24.0;
  double min_height = 4.0;
  double max_height = 18.0;
  double window_fraction = 0.5;   // share of buildings with window styles
  double gable_fraction = 0.4;
};

// Procedural stand-in for vector GIS inputs: a jittered road grid and block
// buildings. Deterministic per seed.
void generate_city_layout(uint64_t seed, Vec2 extent, const CityLayoutParams& params,
                          std::vector<BuildingFootprint>& footprints, RoadNetwork& roads);

}  // namespace aerogen
