#pragma once

#include <map>
#include <string>

#include "aerogen/mesh.hpp"

namespace aerogen {

// A labeled template mesh in its local frame (base at z = 0, +x forward).
struct AssetTemplate {
  std::string id;
  LabeledMesh mesh;
  uint8_t semantic = classes::kClutter;
  bool vegetation_auto = false;  // resolve low/medium/high from scaled height
  double footprint_radius = 0.5; // XY circumradius at scale 1
  double height = 1.0;           // bbox height at scale 1
  double mount_offset = 0.0;     // z offset added to the terrain height
};

class AssetCatalog {
 public:
  // Procedural primitive assets for every placeable class.
  static AssetCatalog standard();

  void add(AssetTemplate asset);
  bool has(const std::string& id) const { return assets_.count(id) != 0; }
  const AssetTemplate& get(const std::string& id) const;  // throws if missing
  const std::map<std::string, AssetTemplate>& all() const { return assets_; }

 private:
  std::map<std::string, AssetTemplate> assets_;
};

}  // namespace aerogen
