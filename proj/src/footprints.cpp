#include "aerogen/footprints.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "aerogen/rng.hpp"

namespace aerogen {

using nlohmann::json;

void BuildingFootprint::validate(size_t index) const {
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("footprint " + std::to_string(index) + ": " + why);
  };
  if (ring.size() < 3) fail("needs >= 3 vertices");
  if (!polygon_is_simple(ring)) fail("self-intersecting ring");
  if (height <= 0.0) fail("height must be > 0");
}

void RoadNetwork::validate() const {
  for (size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].polyline.size() < 2)
      throw std::invalid_argument("road segment " + std::to_string(i) + ": needs >= 2 points");
    if (segments[i].width <= 0.0)
      throw std::invalid_argument("road segment " + std::to_string(i) + ": width must be > 0");
  }
}

double RoadNetwork::total_length() const {
  double len = 0.0;
  for (const auto& seg : segments)
    for (size_t i = 0; i + 1 < seg.polyline.size(); ++i)
      len += (seg.polyline[i + 1] - seg.polyline[i]).norm();
  return len;
}

double RoadNetwork::distance_to_centerline(const Vec2& p) const {
  double d2 = std::numeric_limits<double>::infinity();
  for (const auto& seg : segments)
    for (size_t i = 0; i + 1 < seg.polyline.size(); ++i)
      d2 = std::min(d2, point_segment_dist2(p, seg.polyline[i], seg.polyline[i + 1]));
  return std::sqrt(d2);
}

void load_geojson(const std::string& path, std::vector<BuildingFootprint>& footprints,
                  RoadNetwork& roads) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  json doc = json::parse(f);
  if (doc.value("type", "") != "FeatureCollection")
    throw std::runtime_error(path + ": expected a FeatureCollection");

  for (const auto& feat : doc.at("features")) {
    const auto& geom = feat.at("geometry");
    const auto props = feat.value("properties", json::object());
    std::string type = geom.value("type", "");
    if (type == "Polygon") {
      BuildingFootprint fp;
      const auto& outer = geom.at("coordinates").at(0);
      for (const auto& c : outer)
        fp.ring.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
      // GeoJSON rings repeat the first vertex at the end
      if (fp.ring.size() > 1 && fp.ring.front() == fp.ring.back()) fp.ring.pop_back();
      if (polygon_signed_area(fp.ring) < 0.0)
        std::reverse(fp.ring.begin(), fp.ring.end());
      fp.height = props.value("height", 0.0);
      fp.style = props.value("style", "flat");
      footprints.push_back(std::move(fp));
    } else if (type == "LineString") {
      RoadSegment seg;
      for (const auto& c : geom.at("coordinates"))
        seg.polyline.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
      seg.width = props.value("width", 0.0);
      roads.segments.push_back(std::move(seg));
    }
    // other geometry types are ignored
  }
}

void save_geojson(const std::string& path, const std::vector<BuildingFootprint>& footprints,
                  const RoadNetwork& roads) {
  json features = json::array();
  for (const auto& fp : footprints) {
    json coords = json::array();
    for (const Vec2& v : fp.ring) coords.push_back({v.x, v.y});
    coords.push_back({fp.ring.front().x, fp.ring.front().y});
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({coords})}}},
                        {"properties", {{"height", fp.height}, {"style", fp.style}}}});
  }
  for (const auto& seg : roads.segments) {
    json coords = json::array();
    for (const Vec2& v : seg.polyline) coords.push_back({v.x, v.y});
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "LineString"}, {"coordinates", coords}}},
                        {"properties", {{"width", seg.width}}}});
  }
  json doc = {{"type", "FeatureCollection"}, {"features", features}};
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << doc.dump(2) << "\n";
}

void generate_city_layout(uint64_t seed, Vec2 extent, const CityLayoutParams& params,
                          std::vector<BuildingFootprint>& footprints, RoadNetwork& roads) {
  Rng rng = Rng::stream(seed, "city_layout");

  // Road grid: verticals and horizontals at ~road_pitch with jitter.
  std::vector<double> xs, ys;
  for (double x = params.road_pitch * 0.5; x < extent.x; x += params.road_pitch)
    xs.push_back(std::clamp(x + rng.uniform(-5.0, 5.0), 2.0, extent.x - 2.0));
  for (double y = params.road_pitch * 0.5; y < extent.y; y += params.road_pitch)
    ys.push_back(std::clamp(y + rng.uniform(-5.0, 5.0), 2.0, extent.y - 2.0));
  for (double x : xs)
    roads.segments.push_back({{{x, 0.0}, {x, extent.y}}, params.road_width});
  for (double y : ys)
    roads.segments.push_back({{{0.0, y}, {extent.x, y}}, params.road_width});

  // Buildings: jittered rectangles inside blocks, kept clear of the roads.
  int placed = 0;
  int attempts = 0;
  while (placed < params.building_count && attempts < params.building_count * 60) {
    ++attempts;
    double w = rng.uniform(params.min_building_edge, params.max_building_edge);
    double d = rng.uniform(params.min_building_edge, params.max_building_edge);
    double cx = rng.uniform(w * 0.5 + 2.0, extent.x - w * 0.5 - 2.0);
    double cy = rng.uniform(d * 0.5 + 2.0, extent.y - d * 0.5 - 2.0);
    double ang = rng.bernoulli(0.7) ? 0.0 : rng.uniform(-0.3, 0.3);

    std::vector<Vec2> ring;
    double ca = std::cos(ang), sa = std::sin(ang);
    for (auto [dx, dy] : {std::pair{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}}) {
      double lx = dx * w, ly = dy * d;
      ring.push_back({cx + ca * lx - sa * ly, cy + sa * lx + ca * ly});
    }

    // clearance: corners and center away from road centerlines
    double clearance = params.road_width * 0.5 + 1.5;
    bool ok = roads.distance_to_centerline({cx, cy}) > clearance + std::max(w, d) * 0.5 * 0.0;
    for (const Vec2& v : ring)
      ok = ok && roads.distance_to_centerline(v) > clearance;
    // no overlap with existing buildings (coarse: ring vertices + center)
    for (const auto& other : footprints) {
      if (!ok) break;
      if (point_in_polygon({cx, cy}, other.ring)) ok = false;
      for (const Vec2& v : ring)
        if (point_polygon_dist(v, other.ring) < 3.0) { ok = false; break; }
      for (const Vec2& v : other.ring)
        if (point_in_polygon(v, ring)) { ok = false; break; }
    }
    if (!ok) continue;

    BuildingFootprint fp;
    fp.ring = std::move(ring);
    fp.height = rng.uniform(params.min_height, params.max_height);
    bool gable = rng.bernoulli(params.gable_fraction);
    bool win = rng.bernoulli(params.window_fraction);
    fp.style = std::string(gable ? "gable" : "flat") + (win ? "_win" : "");
    footprints.push_back(std::move(fp));
    ++placed;
  }
}

}  // namespace aerogen
