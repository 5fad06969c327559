#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aerogen/assets.hpp"
#include "aerogen/footprints.hpp"
#include "aerogen/heightfield.hpp"
#include "aerogen/mesh.hpp"

namespace aerogen {

enum class PlacementStrategy {
  kOnRoad,
  kRoadsideBuffer,
  kBuildingBuffer,
  kScatterPolygon,
  kForestCluster,
};

PlacementStrategy strategy_from_name(const std::string& name);
std::string strategy_name(PlacementStrategy s);

struct PlacementRule {
  uint8_t target_class = classes::kClutter;
  std::string model_id;
  PlacementStrategy strategy = PlacementStrategy::kScatterPolygon;
  double interval = 10.0;          // spacing along roads / within polygons, m
  double buffer = 3.0;             // offset band from road edge / building ring, m
  double min_separation = 0.0;
  double coverage_fraction = 0.1;  // scatter/forest polygon area target
  double scale_lo = 1.0, scale_hi = 1.0;
  double yaw_lo = 0.0, yaw_hi = 2.0 * M_PI;

  void validate(size_t index, const AssetCatalog& catalog) const;
};

struct PlacedObject {
  std::string model_id;
  uint8_t semantic = classes::kClutter;
  uint32_t instance_id = 0;
  Vec3 position;
  double yaw = 0.0;
  double scale = 1.0;
};

struct PlacementWarning {
  size_t rule_index;
  std::string message;
};

struct PlacementResult {
  std::vector<PlacedObject> objects;
  std::vector<PlacementWarning> warnings;
};

// Extrudes each footprint into a closed prism seated at the max terrain height
// under its ring; flat or gable roof by style, window quads on "_win" styles.
// One instance id per building, drawn from `next_instance`.
LabeledMesh extrude_buildings(const std::vector<BuildingFootprint>& footprints,
                              const HeightField& hf, uint32_t& next_instance);

// Places objects by the five layout strategies. Unsatisfiable rules are
// skipped with a warning, never an error. Deterministic per seed.
PlacementResult place_objects(const std::vector<PlacementRule>& rules,
                              const RoadNetwork& roads,
                              const std::vector<BuildingFootprint>& footprints,
                              const HeightField& hf, const AssetCatalog& catalog,
                              uint64_t seed, uint32_t& next_instance);

struct AssembleParams {
  double dirt_buffer = 3.0;  // dirt band width around building footprints, m
  uint64_t color_seed = 1;
};

// Single labeled mesh: terrain triangles labeled road/dirt/grass, building
// mesh merged, objects instantiated from the catalog with pose + scale.
// Vegetation instances are classified low/medium/high from bounding-box height.
LabeledMesh assemble_scene(const HeightField& hf, const LabeledMesh& buildings,
                           const std::vector<PlacedObject>& objects,
                           const AssetCatalog& catalog, const RoadNetwork& roads,
                           const std::vector<BuildingFootprint>& footprints,
                           const AssembleParams& params);

}  // namespace aerogen
