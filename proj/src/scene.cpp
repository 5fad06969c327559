#include "aerogen/scene.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "aerogen/rng.hpp"

namespace aerogen {

using Color = std::array<uint8_t, 3>;

PlacementStrategy strategy_from_name(const std::string& name) {
  if (name == "on_road") return PlacementStrategy::kOnRoad;
  if (name == "roadside_buffer") return PlacementStrategy::kRoadsideBuffer;
  if (name == "building_buffer") return PlacementStrategy::kBuildingBuffer;
  if (name == "scatter_polygon") return PlacementStrategy::kScatterPolygon;
  if (name == "forest_cluster") return PlacementStrategy::kForestCluster;
  throw std::invalid_argument("unknown placement strategy '" + name + "'");
}

std::string strategy_name(PlacementStrategy s) {
  switch (s) {
    case PlacementStrategy::kOnRoad: return "on_road";
    case PlacementStrategy::kRoadsideBuffer: return "roadside_buffer";
    case PlacementStrategy::kBuildingBuffer: return "building_buffer";
    case PlacementStrategy::kScatterPolygon: return "scatter_polygon";
    case PlacementStrategy::kForestCluster: return "forest_cluster";
  }
  return "?";
}

void PlacementRule::validate(size_t index, const AssetCatalog& catalog) const {
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("placement rule " + std::to_string(index) + ": " + why);
  };
  if (interval <= 0.0) fail("interval must be > 0");
  if (min_separation < 0.0) fail("min_separation must be >= 0");
  if (coverage_fraction < 0.0 || coverage_fraction > 1.0)
    fail("coverage_fraction must be in [0,1]");
  if (!classes::valid(target_class)) fail("unknown target class");
  if (!catalog.has(model_id)) fail("unknown model_id '" + model_id + "'");
  if (scale_lo <= 0.0 || scale_hi < scale_lo) fail("bad scale range");
}

// ---------------------------------------------------------------------------
// extrude_buildings

namespace {

double max_terrain_under_ring(const std::vector<Vec2>& ring, const HeightField& hf) {
  double zmax = -std::numeric_limits<double>::infinity();
  for (const Vec2& v : ring) zmax = std::max(zmax, hf.height_at(v.x, v.y));
  // also scan grid nodes inside the ring's bbox
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi{-lo.x, -lo.y};
  for (const Vec2& v : ring) {
    lo.x = std::min(lo.x, v.x); lo.y = std::min(lo.y, v.y);
    hi.x = std::max(hi.x, v.x); hi.y = std::max(hi.y, v.y);
  }
  for (double y = lo.y; y <= hi.y; y += hf.cell_size)
    for (double x = lo.x; x <= hi.x; x += hf.cell_size)
      if (point_in_polygon({x, y}, ring)) zmax = std::max(zmax, hf.height_at(x, y));
  return zmax;
}

void emit_ring_cap(LabeledMesh& mesh, const std::vector<Vec2>& ring, double z, bool up,
                   uint8_t sem, uint32_t instance, Color color) {
  auto tris = triangulate_polygon(ring);
  for (const auto& t : tris) {
    Vec3 a{ring[t[0]].x, ring[t[0]].y, z};
    Vec3 b{ring[t[1]].x, ring[t[1]].y, z};
    Vec3 c{ring[t[2]].x, ring[t[2]].y, z};
    if ((b - a).cross(c - a).norm() < 1e-12) continue;  // collinear sliver
    if (up)
      mesh.add_triangle(a, b, c, sem, instance, color);
    else
      mesh.add_triangle(a, c, b, sem, instance, color);
  }
}

void emit_wall(LabeledMesh& mesh, const Vec2& a, const Vec2& b, double z0, double z1,
               uint8_t sem, uint32_t instance, Color color) {
  Vec3 a0{a.x, a.y, z0}, b0{b.x, b.y, z0}, a1{a.x, a.y, z1}, b1{b.x, b.y, z1};
  mesh.add_triangle(a0, b0, b1, sem, instance, color);
  mesh.add_triangle(a0, b1, a1, sem, instance, color);
}

void emit_windows(LabeledMesh& mesh, const Vec2& a, const Vec2& b, double z0, double z1,
                  uint32_t instance, Color color) {
  const double win_w = 1.2, win_h = 1.5, col_pitch = 2.5, floor_pitch = 3.0;
  const double margin = 1.0, out = 0.02;  // offset off the wall plane
  Vec2 dir = (b - a);
  double len = dir.norm();
  if (len < win_w + 2.0 * margin) return;
  dir = dir / len;
  Vec2 normal{dir.y, -dir.x};  // outward for a CCW ring
  for (double zb = z0 + 1.0; zb + win_h <= z1 - 0.3; zb += floor_pitch) {
    for (double s = margin; s + win_w <= len - margin; s += col_pitch) {
      Vec2 p0 = a + dir * s + normal * out;
      Vec2 p1 = a + dir * (s + win_w) + normal * out;
      Vec3 q00{p0.x, p0.y, zb}, q10{p1.x, p1.y, zb};
      Vec3 q01{p0.x, p0.y, zb + win_h}, q11{p1.x, p1.y, zb + win_h};
      mesh.add_triangle(q00, q10, q11, classes::kWindow, instance, color);
      mesh.add_triangle(q00, q11, q01, classes::kWindow, instance, color);
    }
  }
}

}  // namespace

LabeledMesh extrude_buildings(const std::vector<BuildingFootprint>& footprints,
                              const HeightField& hf, uint32_t& next_instance) {
  hf.validate();
  Vec2 lo = hf.origin, hi = hf.max_corner();
  LabeledMesh mesh;

  for (size_t i = 0; i < footprints.size(); ++i) {
    BuildingFootprint fp = footprints[i];
    if (polygon_signed_area(fp.ring) < 0.0)
      std::reverse(fp.ring.begin(), fp.ring.end());
    fp.validate(i);
    for (const Vec2& v : fp.ring)
      if (v.x < lo.x || v.x > hi.x || v.y < lo.y || v.y > hi.y)
        throw std::invalid_argument("footprint " + std::to_string(i) +
                                    ": outside the heightfield extent");

    uint32_t instance = next_instance++;
    double z0 = max_terrain_under_ring(fp.ring, hf);
    double z1 = z0 + fp.height;
    Color wall_color{168, 160, 150};
    Color window_color{120, 170, 205};

    size_t n = fp.ring.size();
    bool windows = fp.style.find("_win") != std::string::npos;
    bool gable = fp.style.rfind("gable", 0) == 0 && n == 4;

    for (size_t k = 0; k < n; ++k) {
      const Vec2& a = fp.ring[k];
      const Vec2& b = fp.ring[(k + 1) % n];
      emit_wall(mesh, a, b, z0, z1, classes::kBuilding, instance, wall_color);
      if (windows) emit_windows(mesh, a, b, z0, z1, instance, window_color);
    }
    emit_ring_cap(mesh, fp.ring, z0, false, classes::kBuilding, instance, wall_color);

    if (gable) {
      const Vec2 &v0 = fp.ring[0], &v1 = fp.ring[1], &v2 = fp.ring[2], &v3 = fp.ring[3];
      Vec2 m01 = (v0 + v1) * 0.5, m23 = (v2 + v3) * 0.5;
      Vec2 m12 = (v1 + v2) * 0.5, m30 = (v3 + v0) * 0.5;
      bool ridge_a = (m23 - m01).norm() >= (m30 - m12).norm();
      Vec2 ra = ridge_a ? m01 : m12;
      Vec2 rb = ridge_a ? m23 : m30;
      double end_len = ridge_a ? 0.5 * ((v1 - v0).norm() + (v3 - v2).norm())
                               : 0.5 * ((v2 - v1).norm() + (v0 - v3).norm());
      double rise = std::clamp(0.25 * end_len, 1.0, 3.0);
      Vec3 r0{ra.x, ra.y, z1 + rise}, r1{rb.x, rb.y, z1 + rise};
      // roof planes + gable-end triangles; ring order keeps them outward
      auto top = [&](const Vec2& v) { return Vec3{v.x, v.y, z1}; };
      if (ridge_a) {
        mesh.add_triangle(top(v1), top(v2), r1, classes::kBuilding, instance, wall_color);
        mesh.add_triangle(top(v1), r1, r0, classes::kBuilding, instance, wall_color);
        mesh.add_triangle(top(v3), top(v0), r0, classes::kBuilding, instance, wall_color);
        mesh.add_triangle(top(v3), r0, r1, classes::kBuilding, instance, wall_color);
        mesh.add_triangle(top(v0), top(v1), r0, classes::kBuilding, instance, wall_color);
        mesh.add_triangle(top(v2), top(v3), r1, classes::kBuilding, instance, wall_color);
      } else {
        mesh.add_triangle(top(v2), top(v3), r1, classes::kBuilding, instance, wall_color);
        mesh.add_triangle(top(v2), r1, r0, classes::kBuilding, instance, wall_color);
        mesh.add_triangle(top(v0), top(v1), r0, classes::kBuilding, instance, wall_color);
        mesh.add_triangle(top(v0), r0, r1, classes::kBuilding, instance, wall_color);
        mesh.add_triangle(top(v1), top(v2), r0, classes::kBuilding, instance, wall_color);
        mesh.add_triangle(top(v3), top(v0), r1, classes::kBuilding, instance, wall_color);
      }
    } else {
      emit_ring_cap(mesh, fp.ring, z1, true, classes::kBuilding, instance, wall_color);
    }
  }
  return mesh;
}

// ---------------------------------------------------------------------------
// place_objects

namespace {

// Grid-hashed occupancy used to enforce pairwise separation.
class Occupancy {
 public:
  explicit Occupancy(double cell) : cell_(cell) {}

  bool accepts(const Vec2& p, double radius, double min_sep,
               const std::vector<PlacedObject>& objects,
               const std::vector<double>& radii,
               const std::vector<double>& seps) const {
    double reach = std::max(min_sep, radius + max_radius_) + max_sep_;
    int r = static_cast<int>(std::ceil(reach / cell_)) + 1;
    auto [cx, cy] = key(p);
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        auto it = cells_.find(pack(cx + dx, cy + dy));
        if (it == cells_.end()) continue;
        for (size_t idx : it->second) {
          double d = (objects[idx].position.xy() - p).norm();
          double need = std::max(std::max(min_sep, seps[idx]), radius + radii[idx]);
          if (d < need) return false;
        }
      }
    }
    return true;
  }

  void insert(const Vec2& p, size_t index, double radius, double sep) {
    auto [cx, cy] = key(p);
    cells_[pack(cx, cy)].push_back(index);
    max_radius_ = std::max(max_radius_, radius);
    max_sep_ = std::max(max_sep_, sep);
  }

 private:
  std::pair<int, int> key(const Vec2& p) const {
    return {static_cast<int>(std::floor(p.x / cell_)),
            static_cast<int>(std::floor(p.y / cell_))};
  }
  static int64_t pack(int x, int y) {
    return (static_cast<int64_t>(x) << 32) ^ (static_cast<uint32_t>(y));
  }
  double cell_;
  double max_radius_ = 0.0, max_sep_ = 0.0;
  std::unordered_map<int64_t, std::vector<size_t>> cells_;
};

struct Candidate {
  Vec2 pos;
  double yaw;
  bool yaw_is_offset = false;  // yaw is relative to a road heading
};

// Random convex-ish polygon for scatter/forest areas.
std::vector<Vec2> random_area_polygon(Rng& rng, const Vec2& lo, const Vec2& hi,
                                      double min_r, double max_r) {
  Vec2 c{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y)};
  double r = rng.uniform(min_r, max_r);
  int nv = rng.uniform_int(5, 9);
  std::vector<Vec2> ring;
  for (int i = 0; i < nv; ++i) {
    double a = 2.0 * M_PI * i / nv;
    double rr = r * rng.uniform(0.6, 1.0);
    ring.push_back({c.x + rr * std::cos(a), c.y + rr * std::sin(a)});
  }
  return ring;
}

}  // namespace

PlacementResult place_objects(const std::vector<PlacementRule>& rules,
                              const RoadNetwork& roads,
                              const std::vector<BuildingFootprint>& footprints,
                              const HeightField& hf, const AssetCatalog& catalog,
                              uint64_t seed, uint32_t& next_instance) {
  hf.validate();
  roads.validate();
  for (size_t i = 0; i < rules.size(); ++i) rules[i].validate(i, catalog);

  PlacementResult result;
  std::vector<double> radii, seps;
  Occupancy occupancy(5.0);
  Vec2 lo = hf.origin, hi = hf.max_corner();
  double area = (hi.x - lo.x) * (hi.y - lo.y);

  for (size_t ri = 0; ri < rules.size(); ++ri) {
    const PlacementRule& rule = rules[ri];
    const AssetTemplate& asset = catalog.get(rule.model_id);
    Rng rng = Rng::stream(seed, "placement", ri);

    std::vector<Candidate> candidates;
    switch (rule.strategy) {
      case PlacementStrategy::kOnRoad: {
        for (const auto& seg : roads.segments) {
          for (size_t e = 0; e + 1 < seg.polyline.size(); ++e) {
            Vec2 a = seg.polyline[e], b = seg.polyline[e + 1];
            double len = (b - a).norm();
            if (len <= 0.0) continue;
            Vec2 dir = (b - a) / len;
            Vec2 normal{dir.y, -dir.x};
            double heading = std::atan2(dir.y, dir.x);
            double half_lane = std::max(0.0, seg.width * 0.5 - asset.footprint_radius - 0.2);
            for (double s = rng.uniform() * rule.interval; s <= len; s += rule.interval) {
              Vec2 p = a + dir * s + normal * rng.uniform(-half_lane, half_lane);
              candidates.push_back({p, heading, true});
            }
          }
        }
        break;
      }
      case PlacementStrategy::kRoadsideBuffer: {
        for (const auto& seg : roads.segments) {
          for (size_t e = 0; e + 1 < seg.polyline.size(); ++e) {
            Vec2 a = seg.polyline[e], b = seg.polyline[e + 1];
            double len = (b - a).norm();
            if (len <= 0.0) continue;
            Vec2 dir = (b - a) / len;
            Vec2 normal{dir.y, -dir.x};
            for (double s = rng.uniform() * rule.interval; s <= len; s += rule.interval) {
              double side = rng.bernoulli(0.5) ? 1.0 : -1.0;
              double off = seg.width * 0.5 + rng.uniform(0.2, std::max(0.21, rule.buffer));
              Vec2 p = a + dir * s + normal * (side * off);
              candidates.push_back({p, std::atan2(dir.y, dir.x), true});
            }
          }
        }
        break;
      }
      case PlacementStrategy::kBuildingBuffer: {
        for (const auto& fp : footprints) {
          std::vector<Vec2> ring = fp.ring;
          if (polygon_signed_area(ring) < 0.0) std::reverse(ring.begin(), ring.end());
          for (size_t k = 0; k < ring.size(); ++k) {
            Vec2 a = ring[k], b = ring[(k + 1) % ring.size()];
            double len = (b - a).norm();
            if (len <= 0.0) continue;
            Vec2 dir = (b - a) / len;
            Vec2 outward{dir.y, -dir.x};
            for (double s = rng.uniform() * rule.interval; s <= len; s += rule.interval) {
              double off = asset.footprint_radius +
                           rng.uniform(0.3, std::max(0.31, rule.buffer));
              Vec2 p = a + dir * s + outward * off;
              candidates.push_back({p, std::atan2(dir.y, dir.x), true});
            }
          }
        }
        break;
      }
      case PlacementStrategy::kScatterPolygon:
      case PlacementStrategy::kForestCluster: {
        bool forest = rule.strategy == PlacementStrategy::kForestCluster;
        double target = rule.coverage_fraction * area;
        double covered = 0.0;
        int attempts = 0;
        while (covered < target && attempts < 256) {
          ++attempts;
          auto ring = forest ? random_area_polygon(rng, lo, hi, 15.0, 45.0)
                             : random_area_polygon(rng, lo, hi, 8.0, 25.0);
          if (!polygon_is_simple(ring)) continue;
          covered += std::abs(polygon_signed_area(ring));
          Vec2 blo{1e300, 1e300}, bhi{-1e300, -1e300};
          for (const Vec2& v : ring) {
            blo.x = std::min(blo.x, v.x); blo.y = std::min(blo.y, v.y);
            bhi.x = std::max(bhi.x, v.x); bhi.y = std::max(bhi.y, v.y);
          }
          for (double y = blo.y; y <= bhi.y; y += rule.interval) {
            for (double x = blo.x; x <= bhi.x; x += rule.interval) {
              Vec2 p{x + rng.uniform(-0.3, 0.3) * rule.interval,
                     y + rng.uniform(-0.3, 0.3) * rule.interval};
              if (point_in_polygon(p, ring))
                candidates.push_back({p, 0.0, false});
            }
          }
        }
        break;
      }
    }

    size_t placed_before = result.objects.size();
    for (const Candidate& cand : candidates) {
      double scale = rng.uniform(rule.scale_lo, rule.scale_hi);
      double yaw_jit = rng.uniform(rule.yaw_lo, rule.yaw_hi);
      double yaw = cand.yaw_is_offset ? cand.yaw + yaw_jit : yaw_jit;
      double radius = asset.footprint_radius * scale;

      const Vec2& p = cand.pos;
      if (p.x - radius < lo.x || p.x + radius > hi.x ||
          p.y - radius < lo.y || p.y + radius > hi.y)
        continue;
      bool clear = true;
      for (const auto& fp : footprints)
        if (point_polygon_dist(p, fp.ring) < radius) { clear = false; break; }
      if (!clear) continue;
      if (!occupancy.accepts(p, radius, rule.min_separation, result.objects, radii, seps))
        continue;

      PlacedObject obj;
      obj.model_id = rule.model_id;
      obj.semantic = rule.target_class;
      obj.instance_id = next_instance++;
      obj.position = {p.x, p.y, hf.height_at(p.x, p.y) + asset.mount_offset};
      obj.yaw = yaw;
      obj.scale = scale;
      occupancy.insert(p, result.objects.size(), radius, rule.min_separation);
      result.objects.push_back(std::move(obj));
      radii.push_back(radius);
      seps.push_back(rule.min_separation);
    }

    bool wanted_some = !candidates.empty() ||
                       (rule.strategy != PlacementStrategy::kScatterPolygon &&
                        rule.strategy != PlacementStrategy::kForestCluster) ||
                       rule.coverage_fraction > 0.0;
    if (result.objects.size() == placed_before && wanted_some) {
      result.warnings.push_back(
          {ri, "rule skipped: no free space for " + rule.model_id + " via " +
                   strategy_name(rule.strategy)});
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// assemble_scene

LabeledMesh assemble_scene(const HeightField& hf, const LabeledMesh& buildings,
                           const std::vector<PlacedObject>& objects,
                           const AssetCatalog& catalog, const RoadNetwork& roads,
                           const std::vector<BuildingFootprint>& footprints,
                           const AssembleParams& params) {
  hf.validate();
  for (const PlacedObject& obj : objects)
    if (!catalog.has(obj.model_id))
      throw std::runtime_error("assemble_scene: missing model_id '" + obj.model_id + "'");

  LabeledMesh mesh;
  Rng color_rng = Rng::stream(params.color_seed, "colors");

  // Terrain: two triangles per cell, cover decided at the triangle centroid.
  const Color road_color{72, 72, 78}, dirt_color{124, 94, 62}, grass_color{86, 142, 64};
  auto cover_of = [&](const Vec2& c) -> std::pair<uint8_t, Color> {
    for (const auto& seg : roads.segments)
      for (size_t e = 0; e + 1 < seg.polyline.size(); ++e)
        if (point_segment_dist2(c, seg.polyline[e], seg.polyline[e + 1]) <=
            0.25 * seg.width * seg.width)
          return {classes::kRoad, road_color};
    for (const auto& fp : footprints)
      if (point_polygon_dist(c, fp.ring) <= params.dirt_buffer)
        return {classes::kDirt, dirt_color};
    return {classes::kGrass, grass_color};
  };

  for (size_t r = 0; r + 1 < hf.rows; ++r) {
    for (size_t c = 0; c + 1 < hf.cols; ++c) {
      double x0 = hf.origin.x + static_cast<double>(c) * hf.cell_size;
      double y0 = hf.origin.y + static_cast<double>(r) * hf.cell_size;
      double x1 = x0 + hf.cell_size, y1 = y0 + hf.cell_size;
      Vec3 p00{x0, y0, hf.at(r, c)}, p10{x1, y0, hf.at(r, c + 1)};
      Vec3 p01{x0, y1, hf.at(r + 1, c)}, p11{x1, y1, hf.at(r + 1, c + 1)};
      for (auto [a, b, d] : {std::array<Vec3, 3>{p00, p10, p11},
                             std::array<Vec3, 3>{p00, p11, p01}}) {
        Vec2 centroid = (a.xy() + b.xy() + d.xy()) / 3.0;
        auto [sem, col] = cover_of(centroid);
        double v = 0.92 + 0.16 * color_rng.uniform();
        Color jittered{static_cast<uint8_t>(std::clamp(col[0] * v, 0.0, 255.0)),
                       static_cast<uint8_t>(std::clamp(col[1] * v, 0.0, 255.0)),
                       static_cast<uint8_t>(std::clamp(col[2] * v, 0.0, 255.0))};
        mesh.add_triangle(a, b, d, sem, 0, jittered);
      }
    }
  }

  // Buildings come in already labeled.
  mesh.vertices.reserve(mesh.vertices.size() + buildings.vertices.size());
  mesh.append(buildings, {0, 0, 0}, 0.0, 1.0, classes::kUnlabeled, 0, 1.0);
  // append() overwrote per-tri instances with 0; restore the building ids.
  std::copy(buildings.tri_instance.begin(), buildings.tri_instance.end(),
            mesh.tri_instance.end() - static_cast<long>(buildings.tri_instance.size()));

  // Objects.
  for (const PlacedObject& obj : objects) {
    const AssetTemplate& asset = catalog.get(obj.model_id);
    uint8_t sem = obj.semantic;
    if (asset.vegetation_auto)
      sem = classes::vegetation_class_for_height(asset.height * obj.scale);
    double value = 0.75 + 0.5 * Rng::stream(params.color_seed, "obj_color",
                                            obj.instance_id).uniform();
    mesh.append(asset.mesh, obj.position, obj.yaw, obj.scale, sem, obj.instance_id, value);
  }

  mesh.validate();
  return mesh;
}

}  // namespace aerogen
