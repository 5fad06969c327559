#include "aerogen/config.hpp"

#include <fstream>
#include <stdexcept>
#include <thread>

namespace aerogen {

using nlohmann::json;

void RunConfig::validate() const {
  if (terrain.extent.x <= 0.0 || terrain.extent.y <= 0.0)
    throw std::invalid_argument("config: terrain extent must be positive");
  if (terrain.cell_size <= 0.0)
    throw std::invalid_argument("config: terrain cell_size must be positive");
  if (terrain.relief_amplitude < 0.0 || terrain.ditch_rate < 0.0 || terrain.bump_rate < 0.0)
    throw std::invalid_argument("config: terrain rates/amplitude must be >= 0");

  // surveyed altitude band; --unsafe-params lifts the gate
  if (!unsafe_params && (flight.altitude < 25.0 || flight.altitude > 120.0))
    throw std::invalid_argument(
        "config: altitude outside the surveyed band [25, 120] m (use --unsafe-params)");
  for (double ov : {flight.forward_overlap, flight.side_overlap})
    if (ov < 0.0 || ov >= 1.0)
      throw std::invalid_argument("config: overlaps must be in [0,1)");
  if (flight.fov_deg <= 0.0 || flight.fov_deg >= 180.0)
    throw std::invalid_argument("config: fov_deg must be in (0,180)");
  if (flight.image_width <= 0 || flight.image_height <= 0)
    throw std::invalid_argument("config: image dimensions must be positive");

  noise.validate();
  transfer.params.validate();
  if (transfer.proxy_grid < 0.0)
    throw std::invalid_argument("config: proxy_grid must be >= 0");
  if (post.downsample_spacing <= 0.0)
    throw std::invalid_argument("config: downsample_spacing must be > 0");
  if (post.tile_edge < 0.0)
    throw std::invalid_argument("config: tile_edge must be >= 0");

  AssetCatalog catalog = AssetCatalog::standard();
  for (size_t i = 0; i < placement.size(); ++i) placement[i].validate(i, catalog);

  if (eval) {
    if (eval->taxonomy != "synthetic18" && eval->taxonomy != "real6")
      throw std::invalid_argument("config: eval taxonomy must be synthetic18 or real6");
  }
}

int RunConfig::effective_workers() const {
  if (workers > 0) return workers;
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

namespace {

json rule_to_json(const PlacementRule& r) {
  return {{"class", classes::name_of(r.target_class)},
          {"model", r.model_id},
          {"strategy", strategy_name(r.strategy)},
          {"interval", r.interval},
          {"buffer", r.buffer},
          {"min_separation", r.min_separation},
          {"coverage_fraction", r.coverage_fraction},
          {"scale_range", {r.scale_lo, r.scale_hi}},
          {"yaw_range", {r.yaw_lo, r.yaw_hi}}};
}

PlacementRule rule_from_json(const json& j) {
  PlacementRule r;
  r.target_class = classes::id_from_name(j.at("class").get<std::string>());
  r.model_id = j.at("model");
  r.strategy = strategy_from_name(j.at("strategy").get<std::string>());
  r.interval = j.value("interval", 10.0);
  r.buffer = j.value("buffer", 3.0);
  r.min_separation = j.value("min_separation", 0.0);
  r.coverage_fraction = j.value("coverage_fraction", 0.1);
  if (j.contains("scale_range")) {
    r.scale_lo = j["scale_range"].at(0);
    r.scale_hi = j["scale_range"].at(1);
  }
  if (j.contains("yaw_range")) {
    r.yaw_lo = j["yaw_range"].at(0);
    r.yaw_hi = j["yaw_range"].at(1);
  }
  return r;
}

}  // namespace

json RunConfig::to_json() const {
  json j;
  j["seed"] = seed;
  j["out_dir"] = out_dir;
  j["workers"] = workers;
  j["unsafe_params"] = unsafe_params;
  j["terrain"] = {{"extent", {terrain.extent.x, terrain.extent.y}},
                  {"cell_size", terrain.cell_size},
                  {"relief_amplitude", terrain.relief_amplitude},
                  {"ditch_rate", terrain.ditch_rate},
                  {"bump_rate", terrain.bump_rate}};
  j["city"] = {{"geojson", city.geojson},
               {"building_count", city.layout.building_count},
               {"road_pitch", city.layout.road_pitch},
               {"road_width", city.layout.road_width},
               {"min_building_edge", city.layout.min_building_edge},
               {"max_building_edge", city.layout.max_building_edge},
               {"min_height", city.layout.min_height},
               {"max_height", city.layout.max_height},
               {"window_fraction", city.layout.window_fraction},
               {"gable_fraction", city.layout.gable_fraction}};
  json rules = json::array();
  for (const PlacementRule& r : placement) rules.push_back(rule_to_json(r));
  j["placement"] = rules;
  j["flight"] = {{"altitude", flight.altitude},
                 {"forward_overlap", flight.forward_overlap},
                 {"side_overlap", flight.side_overlap},
                 {"fov_deg", flight.fov_deg},
                 {"image_width", flight.image_width},
                 {"image_height", flight.image_height},
                 {"wind_sigma_pos", flight.wind_sigma_pos},
                 {"wind_sigma_ang", flight.wind_sigma_ang},
                 {"pitch_deg", flight.pitch_deg},
                 {"sun_azimuth", flight.sun_azimuth},
                 {"fog_density", flight.fog_density}};
  j["noise"] = {{"surface_sigma", noise.surface_sigma},
                {"outlier_rate", noise.outlier_rate},
                {"outlier_radius", noise.outlier_radius},
                {"min_views", noise.min_views},
                {"density_per_view", noise.density_per_view},
                {"view_cap", noise.view_cap},
                {"thin_dropout_width", noise.thin_dropout_width},
                {"dropout_prob", noise.dropout_prob}};
  j["transfer"] = {{"max_nn_distance", transfer.params.max_nn_distance},
                   {"ground_link_radius", transfer.params.ground_link_radius},
                   {"fallback_class", classes::name_of(transfer.params.fallback_class)},
                   {"proxy_grid", transfer.proxy_grid}};
  j["postprocess"] = {{"downsample_spacing", post.downsample_spacing},
                      {"map_to_real6", post.map_to_real6},
                      {"tile_edge", post.tile_edge}};
  if (eval) {
    j["eval"] = {{"gt", eval->gt_path},
                 {"pred", eval->pred_path},
                 {"taxonomy", eval->taxonomy},
                 {"pred_instances", eval->pred_instances}};
  }
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  c.seed = j.value("seed", uint64_t{1});
  c.out_dir = j.value("out_dir", std::string("out"));
  c.workers = j.value("workers", 0);
  c.unsafe_params = j.value("unsafe_params", false);
  if (j.contains("terrain")) {
    const json& t = j["terrain"];
    if (t.contains("extent")) c.terrain.extent = {t["extent"].at(0), t["extent"].at(1)};
    c.terrain.cell_size = t.value("cell_size", c.terrain.cell_size);
    c.terrain.relief_amplitude = t.value("relief_amplitude", c.terrain.relief_amplitude);
    c.terrain.ditch_rate = t.value("ditch_rate", c.terrain.ditch_rate);
    c.terrain.bump_rate = t.value("bump_rate", c.terrain.bump_rate);
  }
  if (j.contains("city")) {
    const json& t = j["city"];
    c.city.geojson = t.value("geojson", std::string());
    c.city.layout.building_count = t.value("building_count", c.city.layout.building_count);
    c.city.layout.road_pitch = t.value("road_pitch", c.city.layout.road_pitch);
    c.city.layout.road_width = t.value("road_width", c.city.layout.road_width);
    c.city.layout.min_building_edge =
        t.value("min_building_edge", c.city.layout.min_building_edge);
    c.city.layout.max_building_edge =
        t.value("max_building_edge", c.city.layout.max_building_edge);
    c.city.layout.min_height = t.value("min_height", c.city.layout.min_height);
    c.city.layout.max_height = t.value("max_height", c.city.layout.max_height);
    c.city.layout.window_fraction = t.value("window_fraction", c.city.layout.window_fraction);
    c.city.layout.gable_fraction = t.value("gable_fraction", c.city.layout.gable_fraction);
  }
  if (j.contains("placement"))
    for (const json& r : j["placement"]) c.placement.push_back(rule_from_json(r));
  if (j.contains("flight")) {
    const json& t = j["flight"];
    c.flight.altitude = t.value("altitude", c.flight.altitude);
    c.flight.forward_overlap = t.value("forward_overlap", c.flight.forward_overlap);
    c.flight.side_overlap = t.value("side_overlap", c.flight.side_overlap);
    c.flight.fov_deg = t.value("fov_deg", c.flight.fov_deg);
    c.flight.image_width = t.value("image_width", c.flight.image_width);
    c.flight.image_height = t.value("image_height", c.flight.image_height);
    c.flight.wind_sigma_pos = t.value("wind_sigma_pos", c.flight.wind_sigma_pos);
    c.flight.wind_sigma_ang = t.value("wind_sigma_ang", c.flight.wind_sigma_ang);
    c.flight.pitch_deg = t.value("pitch_deg", c.flight.pitch_deg);
    c.flight.sun_azimuth = t.value("sun_azimuth", c.flight.sun_azimuth);
    c.flight.fog_density = t.value("fog_density", c.flight.fog_density);
  }
  if (j.contains("noise")) {
    const json& t = j["noise"];
    c.noise.surface_sigma = t.value("surface_sigma", c.noise.surface_sigma);
    c.noise.outlier_rate = t.value("outlier_rate", c.noise.outlier_rate);
    c.noise.outlier_radius = t.value("outlier_radius", c.noise.outlier_radius);
    c.noise.min_views = t.value("min_views", c.noise.min_views);
    c.noise.density_per_view = t.value("density_per_view", c.noise.density_per_view);
    c.noise.view_cap = t.value("view_cap", c.noise.view_cap);
    c.noise.thin_dropout_width = t.value("thin_dropout_width", c.noise.thin_dropout_width);
    c.noise.dropout_prob = t.value("dropout_prob", c.noise.dropout_prob);
  }
  c.noise.seed = c.seed;
  if (j.contains("transfer")) {
    const json& t = j["transfer"];
    c.transfer.params.max_nn_distance =
        t.value("max_nn_distance", c.transfer.params.max_nn_distance);
    c.transfer.params.ground_link_radius =
        t.value("ground_link_radius", c.transfer.params.ground_link_radius);
    if (t.contains("fallback_class"))
      c.transfer.params.fallback_class =
          classes::id_from_name(t["fallback_class"].get<std::string>());
    c.transfer.proxy_grid = t.value("proxy_grid", c.transfer.proxy_grid);
  }
  if (j.contains("postprocess")) {
    const json& t = j["postprocess"];
    c.post.downsample_spacing = t.value("downsample_spacing", c.post.downsample_spacing);
    c.post.map_to_real6 = t.value("map_to_real6", c.post.map_to_real6);
    c.post.tile_edge = t.value("tile_edge", c.post.tile_edge);
  }
  if (j.contains("eval")) {
    EvalConfig e;
    e.gt_path = j["eval"].value("gt", std::string());
    e.pred_path = j["eval"].value("pred", std::string());
    e.taxonomy = j["eval"].value("taxonomy", std::string("synthetic18"));
    e.pred_instances = j["eval"].value("pred_instances", std::string());
    c.eval = e;
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot read config " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw std::invalid_argument("config " + path + ": " + e.what());
  }
  return from_json(j);
}

void RunConfig::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << to_json().dump(2) << "\n";
}

}  // namespace aerogen
