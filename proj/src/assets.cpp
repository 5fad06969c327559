#include "aerogen/assets.hpp"

#include <cmath>
#include <stdexcept>

namespace aerogen {

namespace {

using Color = std::array<uint8_t, 3>;

void add_box(LabeledMesh& m, Vec3 center, Vec3 size, uint8_t sem, Color color) {
  Vec3 h = size * 0.5;
  Vec3 lo = center - h, hi = center + h;
  Vec3 v[8] = {{lo.x, lo.y, lo.z}, {hi.x, lo.y, lo.z}, {hi.x, hi.y, lo.z}, {lo.x, hi.y, lo.z},
               {lo.x, lo.y, hi.z}, {hi.x, lo.y, hi.z}, {hi.x, hi.y, hi.z}, {lo.x, hi.y, hi.z}};
  const int faces[6][4] = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
                           {2, 3, 7, 6}, {1, 2, 6, 5}, {3, 0, 4, 7}};
  for (const auto& fc : faces) {
    m.add_triangle(v[fc[0]], v[fc[1]], v[fc[2]], sem, 0, color);
    m.add_triangle(v[fc[0]], v[fc[2]], v[fc[3]], sem, 0, color);
  }
}

void add_cylinder(LabeledMesh& m, Vec3 base, double radius, double height, int sides,
                  uint8_t sem, Color color) {
  double top = base.z + height;
  for (int i = 0; i < sides; ++i) {
    double a0 = 2.0 * M_PI * i / sides;
    double a1 = 2.0 * M_PI * (i + 1) / sides;
    Vec3 b0{base.x + radius * std::cos(a0), base.y + radius * std::sin(a0), base.z};
    Vec3 b1{base.x + radius * std::cos(a1), base.y + radius * std::sin(a1), base.z};
    Vec3 t0{b0.x, b0.y, top}, t1{b1.x, b1.y, top};
    m.add_triangle(b0, b1, t1, sem, 0, color);
    m.add_triangle(b0, t1, t0, sem, 0, color);
    m.add_triangle({base.x, base.y, top}, t0, t1, sem, 0, color);   // cap
    m.add_triangle({base.x, base.y, base.z}, b1, b0, sem, 0, color);
  }
}

void add_ellipsoid(LabeledMesh& m, Vec3 center, Vec3 radii, int slices, int stacks,
                   uint8_t sem, Color color) {
  auto pt = [&](int i, int j) {
    double theta = M_PI * j / stacks;           // 0..pi from north pole
    double phi = 2.0 * M_PI * i / slices;
    return Vec3{center.x + radii.x * std::sin(theta) * std::cos(phi),
                center.y + radii.y * std::sin(theta) * std::sin(phi),
                center.z + radii.z * std::cos(theta)};
  };
  for (int j = 0; j < stacks; ++j) {
    for (int i = 0; i < slices; ++i) {
      Vec3 p00 = pt(i, j), p10 = pt(i + 1, j), p01 = pt(i, j + 1), p11 = pt(i + 1, j + 1);
      if (j > 0) m.add_triangle(p00, p01, p11, sem, 0, color);
      if (j < stacks - 1) m.add_triangle(p00, p11, p10, sem, 0, color);
    }
  }
}

AssetTemplate finish(std::string id, LabeledMesh mesh, uint8_t sem, bool veg_auto) {
  AssetTemplate a;
  a.id = std::move(id);
  a.mesh = std::move(mesh);
  a.semantic = sem;
  a.vegetation_auto = veg_auto;
  Aabb b = a.mesh.bounds();
  a.height = b.hi.z - b.lo.z;
  double r = 0.0;
  for (const Vec3& v : a.mesh.vertices) r = std::max(r, v.xy().norm());
  a.footprint_radius = r;
  return a;
}

AssetTemplate make_tree(const std::string& id, double trunk_r, double trunk_h,
                        double crown_r, double crown_h) {
  LabeledMesh m;
  add_cylinder(m, {0, 0, 0}, trunk_r, trunk_h, 6, classes::kHighVeg, {110, 80, 50});
  add_ellipsoid(m, {0, 0, trunk_h + crown_h * 0.5}, {crown_r, crown_r, crown_h * 0.5},
                8, 6, classes::kHighVeg, {70, 130, 55});
  return finish(id, std::move(m), classes::kHighVeg, true);
}

}  // namespace

void AssetCatalog::add(AssetTemplate asset) {
  assets_[asset.id] = std::move(asset);
}

const AssetTemplate& AssetCatalog::get(const std::string& id) const {
  auto it = assets_.find(id);
  if (it == assets_.end())
    throw std::runtime_error("asset catalog: unknown model_id '" + id + "'");
  return it->second;
}

AssetCatalog AssetCatalog::standard() {
  using namespace classes;
  AssetCatalog cat;

  cat.add(make_tree("tree_small", 0.05, 0.35, 0.45, 0.9));    // ~1.25 m
  cat.add(make_tree("tree_medium", 0.12, 1.0, 1.1, 2.4));     // ~3.4 m
  cat.add(make_tree("tree_high", 0.25, 2.5, 2.6, 5.2));       // ~7.7 m

  {  // hollow-shell test asset: a bare spherical crown
    LabeledMesh m;
    add_ellipsoid(m, {0, 0, 1.0}, {1.0, 1.0, 1.0}, 16, 12, kHighVeg, {70, 130, 55});
    cat.add(finish("crown_sphere", std::move(m), kHighVeg, true));
  }

  {  // sedan: body + cabin
    LabeledMesh m;
    add_box(m, {0, 0, 0.55}, {4.2, 1.8, 0.9}, kVehicle, {150, 40, 40});
    add_box(m, {-0.2, 0, 1.25}, {2.2, 1.6, 0.5}, kVehicle, {150, 40, 40});
    cat.add(finish("car", std::move(m), kVehicle, false));
  }
  {  // truck: cab + cargo
    LabeledMesh m;
    add_box(m, {2.3, 0, 1.25}, {2.2, 2.3, 2.3}, kTruck, {60, 70, 120});
    add_box(m, {-1.2, 0, 1.6}, {4.6, 2.4, 3.0}, kTruck, {200, 200, 205});
    cat.add(finish("truck", std::move(m), kTruck, false));
  }
  {  // light aircraft: fuselage + wings + tail
    LabeledMesh m;
    add_box(m, {0, 0, 1.4}, {8.0, 1.4, 1.4}, kAircraft, {220, 220, 225});
    add_box(m, {0.5, 0, 1.9}, {1.6, 10.0, 0.18}, kAircraft, {220, 220, 225});
    add_box(m, {-3.6, 0, 2.4}, {1.0, 3.2, 0.16}, kAircraft, {220, 220, 225});
    add_box(m, {-3.8, 0, 2.2}, {1.0, 0.14, 1.6}, kAircraft, {220, 220, 225});
    cat.add(finish("aircraft", std::move(m), kAircraft, false));
  }
  {  // armored vehicle: hull + turret + barrel
    LabeledMesh m;
    add_box(m, {0, 0, 0.9}, {6.4, 3.0, 1.8}, kMilitaryVehicle, {90, 100, 70});
    add_box(m, {-0.4, 0, 2.25}, {2.6, 2.0, 0.9}, kMilitaryVehicle, {90, 100, 70});
    add_box(m, {2.2, 0, 2.3}, {3.0, 0.25, 0.25}, kMilitaryVehicle, {90, 100, 70});
    cat.add(finish("military_vehicle", std::move(m), kMilitaryVehicle, false));
  }
  {  // bicycle: two wheels + frame
    LabeledMesh m;
    add_box(m, {0.55, 0, 0.35}, {0.7, 0.08, 0.7}, kBike, {40, 40, 45});
    add_box(m, {-0.55, 0, 0.35}, {0.7, 0.08, 0.7}, kBike, {40, 40, 45});
    add_box(m, {0, 0, 0.75}, {1.1, 0.1, 0.45}, kBike, {180, 60, 40});
    cat.add(finish("bike", std::move(m), kBike, false));
  }
  {  // motorcycle
    LabeledMesh m;
    add_box(m, {0.7, 0, 0.35}, {0.7, 0.18, 0.7}, kMotorcycle, {40, 40, 45});
    add_box(m, {-0.7, 0, 0.35}, {0.7, 0.18, 0.7}, kMotorcycle, {40, 40, 45});
    add_box(m, {0, 0, 0.8}, {1.6, 0.4, 0.6}, kMotorcycle, {60, 60, 160});
    cat.add(finish("motorcycle", std::move(m), kMotorcycle, false));
  }
  {  // light pole with arm and head
    LabeledMesh m;
    add_cylinder(m, {0, 0, 0}, 0.09, 5.6, 6, kLightPole, {120, 120, 125});
    add_box(m, {0.7, 0, 5.68}, {1.5, 0.12, 0.12}, kLightPole, {120, 120, 125});
    add_box(m, {1.35, 0, 5.55}, {0.5, 0.3, 0.18}, kLightPole, {235, 230, 180});
    cat.add(finish("light_pole", std::move(m), kLightPole, false));
  }
  {  // street sign: post + panel
    LabeledMesh m;
    add_cylinder(m, {0, 0, 0}, 0.05, 2.4, 6, kStreetSign, {130, 130, 135});
    add_box(m, {0, 0, 2.7}, {0.65, 0.06, 0.65}, kStreetSign, {200, 60, 50});
    cat.add(finish("street_sign", std::move(m), kStreetSign, false));
  }
  {  // bench (clutter)
    LabeledMesh m;
    add_box(m, {0, 0, 0.45}, {1.6, 0.5, 0.08}, kClutter, {140, 100, 60});
    add_box(m, {0, -0.28, 0.7}, {1.6, 0.08, 0.5}, kClutter, {140, 100, 60});
    add_box(m, {-0.7, 0, 0.21}, {0.1, 0.45, 0.42}, kClutter, {80, 80, 85});
    add_box(m, {0.7, 0, 0.21}, {0.1, 0.45, 0.42}, kClutter, {80, 80, 85});
    cat.add(finish("bench", std::move(m), kClutter, false));
  }
  {  // barricade (clutter)
    LabeledMesh m;
    add_box(m, {0, 0, 0.55}, {1.5, 0.12, 0.35}, kClutter, {230, 120, 40});
    add_box(m, {-0.65, 0, 0.25}, {0.12, 0.5, 0.5}, kClutter, {230, 120, 40});
    add_box(m, {0.65, 0, 0.25}, {0.12, 0.5, 0.5}, kClutter, {230, 120, 40});
    cat.add(finish("barricade", std::move(m), kClutter, false));
  }
  {  // fence panel; chained panels form runs
    LabeledMesh m;
    add_box(m, {0, 0, 0.75}, {2.0, 0.08, 1.5}, kFence, {150, 140, 120});
    cat.add(finish("fence_panel", std::move(m), kFence, false));
  }
  return cat;
}

}  // namespace aerogen
