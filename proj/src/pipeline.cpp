#include "aerogen/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "aerogen/annotate.hpp"
#include "aerogen/evalmetrics.hpp"
#include "aerogen/kdtree.hpp"
#include "aerogen/pcproc.hpp"
#include "aerogen/recon.hpp"
#include "aerogen/rng.hpp"

namespace aerogen {

namespace fs = std::filesystem;
using nlohmann::json;

struct Pipeline::StageTimer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

Pipeline::Pipeline(RunConfig config) : config_(std::move(config)) {
  config_.validate();
  manifest_.config_snapshot = config_.to_json();
  fs::create_directories(config_.out_dir);
}

std::string Pipeline::out_path(const std::string& rel) const {
  return (fs::path(config_.out_dir) / rel).string();
}

void Pipeline::record(StageRecord rec) {
  // replace an earlier record when a stage re-runs
  for (StageRecord& st : manifest_.stages) {
    if (st.name == rec.name) {
      st = std::move(rec);
      return;
    }
  }
  manifest_.stages.push_back(std::move(rec));
}

namespace {

FileRecord file_record(const std::string& out_dir, const std::string& abs) {
  return {fs::relative(abs, out_dir).string(), sha256_file(abs)};
}

}  // namespace

// ---------------------------------------------------------------------------

void Pipeline::gen_scene() {
  StageTimer timer;
  StageRecord rec{"gen-scene", {}, {}, 0.0};

  uint64_t seed = Rng::mix(config_.seed, Rng::hash_name("gen-scene"));
  HeightField hf = generate_terrain(seed, config_.terrain.extent, config_.terrain.cell_size,
                                    config_.terrain.relief_amplitude);
  if (config_.terrain.ditch_rate > 0.0 || config_.terrain.bump_rate > 0.0)
    hf = sculpt_ground_details(hf, seed, config_.terrain.ditch_rate,
                               config_.terrain.bump_rate);

  std::vector<BuildingFootprint> footprints;
  RoadNetwork roads;
  if (!config_.city.geojson.empty()) {
    load_geojson(config_.city.geojson, footprints, roads);
    rec.inputs.push_back({config_.city.geojson, sha256_file(config_.city.geojson)});
  } else {
    generate_city_layout(seed, config_.terrain.extent, config_.city.layout, footprints, roads);
  }

  AssetCatalog catalog = AssetCatalog::standard();
  uint32_t next_instance = 1;
  LabeledMesh buildings = extrude_buildings(footprints, hf, next_instance);
  PlacementResult placement = place_objects(config_.placement, roads, footprints, hf,
                                            catalog, seed, next_instance);
  for (const PlacementWarning& w : placement.warnings)
    manifest_.warnings.push_back("gen-scene rule " + std::to_string(w.rule_index) + ": " +
                                 w.message);

  AssembleParams ap;
  ap.color_seed = seed;
  LabeledMesh scene = assemble_scene(hf, buildings, placement.objects, catalog, roads,
                                     footprints, ap);

  save_heightfield(hf, out_path("heightfield.txt"));
  save_geojson(out_path("layout.geojson"), footprints, roads);
  save_mesh_ply(scene, out_path("scene.ply"));

  // audit: placed objects and mesh instances
  std::set<uint32_t> mesh_instances;
  for (uint32_t inst : scene.tri_instance)
    if (inst != 0) mesh_instances.insert(inst);
  json placed = json::array();
  for (const PlacedObject& obj : placement.objects)
    placed.push_back({{"model", obj.model_id},
                      {"instance", obj.instance_id},
                      {"class", classes::name_of(obj.semantic)},
                      {"position", {obj.position.x, obj.position.y, obj.position.z}},
                      {"yaw", obj.yaw},
                      {"scale", obj.scale}});
  {
    std::ofstream f(out_path("objects.json"));
    f << placed.dump(1) << "\n";
  }
  manifest_.audit["placed_objects"] = placement.objects.size();
  manifest_.audit["scene_instances"] = mesh_instances.size();
  manifest_.audit["scene_triangles"] = scene.tri_count();

  rec.outputs.push_back(file_record(config_.out_dir, out_path("heightfield.txt")));
  rec.outputs.push_back(file_record(config_.out_dir, out_path("layout.geojson")));
  rec.outputs.push_back(file_record(config_.out_dir, out_path("objects.json")));
  rec.outputs.push_back(file_record(config_.out_dir, out_path("scene.ply")));
  rec.seconds = timer.seconds();
  record(std::move(rec));
}

void Pipeline::plan_flight() {
  StageTimer timer;
  StageRecord rec{"plan-flight", {}, {}, 0.0};

  AoiRect aoi{{0.0, 0.0}, config_.terrain.extent};
  CameraIntrinsics k = CameraIntrinsics::from_hfov(
      config_.flight.image_width, config_.flight.image_height,
      config_.flight.fov_deg * M_PI / 180.0);
  FlightPlan plan = plan_crosshatch(aoi, config_.flight.altitude,
                                    config_.flight.forward_overlap,
                                    config_.flight.side_overlap, k);
  double pitch = config_.flight.pitch_deg * M_PI / 180.0;
  for (CameraPose& pose : plan.poses) pose.pitch = pitch;
  plan.sun_azimuth = config_.flight.sun_azimuth;
  plan.fog_density = config_.flight.fog_density;
  if (config_.flight.wind_sigma_pos > 0.0 || config_.flight.wind_sigma_ang > 0.0) {
    uint64_t seed = Rng::mix(config_.seed, Rng::hash_name("wind"));
    plan = apply_wind_jitter(plan, seed, config_.flight.wind_sigma_pos,
                             config_.flight.wind_sigma_ang);
  }
  save_flight_plan(plan, out_path("flightplan.json"));
  manifest_.audit["flight_poses"] = plan.poses.size();

  rec.outputs.push_back(file_record(config_.out_dir, out_path("flightplan.json")));
  rec.seconds = timer.seconds();
  record(std::move(rec));
}

void Pipeline::render_images() {
  StageTimer timer;
  StageRecord rec{"render", {}, {}, 0.0};
  rec.inputs.push_back(file_record(config_.out_dir, out_path("scene.ply")));
  rec.inputs.push_back(file_record(config_.out_dir, out_path("flightplan.json")));

  LabeledMesh scene = load_mesh_ply(out_path("scene.ply"));
  FlightPlan plan = load_flight_plan(out_path("flightplan.json"));
  Bvh bvh(scene);

  fs::create_directories(out_path("images"));
  int workers = config_.effective_workers();

  char name[32];
  for (size_t i = 0; i < plan.poses.size(); ++i) {
    Camera cam{plan.intrinsics, plan.poses[i]};
    DepthLabelImage img = render(cam, bvh, scene, workers);
    std::snprintf(name, sizeof(name), "images/%05zu.dli", i);
    save_depth_label_image(img, out_path(name));
  }
  json index = {{"count", plan.poses.size()}, {"pattern", "images/%05d.dli"}};
  {
    std::ofstream f(out_path("images/index.json"));
    f << index.dump(1) << "\n";
  }

  // hash the image set as one logical output (digest of per-file digests)
  std::string combined;
  for (size_t i = 0; i < plan.poses.size(); ++i) {
    std::snprintf(name, sizeof(name), "images/%05zu.dli", i);
    combined += sha256_file(out_path(name));
  }
  rec.outputs.push_back({"images/*", sha256_hex(combined.data(), combined.size())});
  rec.outputs.push_back(file_record(config_.out_dir, out_path("images/index.json")));
  rec.seconds = timer.seconds();
  record(std::move(rec));
}

void Pipeline::reconstruct() {
  StageTimer timer;
  StageRecord rec{"reconstruct", {}, {}, 0.0};
  rec.inputs.push_back(file_record(config_.out_dir, out_path("scene.ply")));
  rec.inputs.push_back(file_record(config_.out_dir, out_path("flightplan.json")));

  LabeledMesh scene = load_mesh_ply(out_path("scene.ply"));
  FlightPlan plan = load_flight_plan(out_path("flightplan.json"));
  Bvh bvh(scene);

  NoiseParams params = config_.noise;
  params.seed = Rng::mix(config_.seed, Rng::hash_name("reconstruct"));
  std::vector<uint32_t> origin_tri;
  LabeledPointCloud recon = simulate_reconstruction(scene, bvh, plan, params,
                                                    config_.effective_workers(), &origin_tri);
  save_cloud_ply(recon, out_path("recon.ply"));
  {  // origin triangles, diagnostics for the boundary-mislabel estimate
    std::ofstream f(out_path("recon_origin.bin"), std::ios::binary);
    f.write(reinterpret_cast<const char*>(origin_tri.data()),
            static_cast<std::streamsize>(origin_tri.size() * sizeof(uint32_t)));
  }
  manifest_.audit["recon_points"] = recon.size();

  rec.outputs.push_back(file_record(config_.out_dir, out_path("recon.ply")));
  rec.outputs.push_back(file_record(config_.out_dir, out_path("recon_origin.bin")));
  rec.seconds = timer.seconds();
  record(std::move(rec));
}

void Pipeline::annotate() {
  StageTimer timer;
  StageRecord rec{"annotate", {}, {}, 0.0};
  rec.inputs.push_back(file_record(config_.out_dir, out_path("recon.ply")));

  // proxy from the rendered depth/label images
  json index;
  {
    std::ifstream f(out_path("images/index.json"));
    if (!f) throw std::runtime_error("annotate: missing images/index.json (run render)");
    index = json::parse(f);
  }
  size_t n_images = index.at("count");
  std::vector<DepthLabelImage> images;
  images.reserve(n_images);
  char name[32];
  for (size_t i = 0; i < n_images; ++i) {
    std::snprintf(name, sizeof(name), "images/%05zu.dli", i);
    images.push_back(load_depth_label_image(out_path(name)));
  }
  LabeledPointCloud proxy = backproject_proxy(images);
  images.clear();
  if (config_.transfer.proxy_grid > 0.0)
    proxy = grid_downsample(proxy, config_.transfer.proxy_grid);
  save_cloud_ply(proxy, out_path("proxy.ply"));

  LabeledPointCloud recon = load_cloud_ply(out_path("recon.ply"));
  TransferStats tstats;
  LabeledPointCloud labeled = transfer_labels(recon, proxy, config_.transfer.params,
                                              config_.effective_workers(), &tstats);
  ConnectivityStats cstats;
  labeled = enforce_ground_connectivity(labeled, config_.transfer.params, &cstats);

  save_cloud_ply(labeled, out_path("labeled.ply"));
  save_cloud_txt(labeled, out_path("labeled.txt"));

  manifest_.audit["proxy_points"] = proxy.size();
  manifest_.audit["unlabeled_fraction"] = tstats.unlabeled_fraction();
  manifest_.audit["ground_components"] = cstats.components;
  manifest_.audit["ground_relabeled"] = cstats.relabeled;
  if (cstats.no_ground)
    manifest_.warnings.push_back("annotate: no ground-family points; connectivity no-op");

  // boundary-mislabel estimate: transferred label vs source-triangle label
  {
    std::ifstream f(out_path("recon_origin.bin"), std::ios::binary);
    if (f) {
      std::vector<uint32_t> origin(recon.size());
      f.read(reinterpret_cast<char*>(origin.data()),
             static_cast<std::streamsize>(origin.size() * sizeof(uint32_t)));
      if (f) {
        LabeledMesh scene = load_mesh_ply(out_path("scene.ply"));
        size_t mismatched = 0;
        for (size_t i = 0; i < labeled.size(); ++i)
          if (labeled.semantic[i] != scene.tri_semantic[origin[i]]) ++mismatched;
        double estimate =
            labeled.size() ? static_cast<double>(mismatched) / labeled.size() : 0.0;
        manifest_.audit["boundary_mislabel_estimate"] = estimate;
      }
    }
  }

  // audit: class and instance coverage of the labeled cloud
  std::set<uint8_t> class_set;
  std::set<uint32_t> instance_set;
  for (size_t i = 0; i < labeled.size(); ++i) {
    if (labeled.semantic[i] != classes::kUnlabeled) class_set.insert(labeled.semantic[i]);
    if (labeled.instance[i] != 0) instance_set.insert(labeled.instance[i]);
  }
  manifest_.audit["classes_present"] = class_set.size();
  manifest_.audit["instances_with_points"] = instance_set.size();

  // placed objects that ended up with no points at all
  {
    std::ifstream f(out_path("objects.json"));
    if (f) {
      json placed = json::parse(f);
      size_t missing = 0;
      for (const auto& obj : placed)
        if (!instance_set.count(obj.at("instance").get<uint32_t>())) ++missing;
      manifest_.audit["placed_instances"] = placed.size();
      manifest_.audit["placed_instances_missing_points"] = missing;
      if (missing > 0)
        manifest_.warnings.push_back("annotate: " + std::to_string(missing) +
                                     " placed objects have no labeled points");
    }
  }

  rec.outputs.push_back(file_record(config_.out_dir, out_path("proxy.ply")));
  rec.outputs.push_back(file_record(config_.out_dir, out_path("labeled.ply")));
  rec.outputs.push_back(file_record(config_.out_dir, out_path("labeled.txt")));
  rec.seconds = timer.seconds();
  record(std::move(rec));
}

void Pipeline::postprocess() {
  StageTimer timer;
  StageRecord rec{"postprocess", {}, {}, 0.0};
  rec.inputs.push_back(file_record(config_.out_dir, out_path("labeled.ply")));

  LabeledPointCloud labeled = load_cloud_ply(out_path("labeled.ply"));
  LabeledPointCloud train = grid_downsample(labeled, config_.post.downsample_spacing);
  save_cloud_ply(train, out_path("train.ply"));
  save_cloud_txt(train, out_path("train.txt"));
  manifest_.audit["train_points"] = train.size();

  std::vector<std::string> names;
  for (auto n : classes::kNames) names.emplace_back(n);
  save_histogram_csv(class_histogram(train), names, out_path("class_histogram.csv"));
  rec.outputs.push_back(file_record(config_.out_dir, out_path("train.ply")));
  rec.outputs.push_back(file_record(config_.out_dir, out_path("train.txt")));
  rec.outputs.push_back(file_record(config_.out_dir, out_path("class_histogram.csv")));

  if (config_.post.map_to_real6) {
    ClassMapping m6 = ClassMapping::synthetic18_to_real6();
    LabeledPointCloud mapped = map_classes(train, m6);
    save_cloud_ply(mapped, out_path("train_real6.ply"));
    std::vector<std::string> names6;
    for (auto n : classes::real6::kNames) names6.emplace_back(n);
    save_histogram_csv(class_histogram(mapped), names6, out_path("class_histogram_real6.csv"));
    rec.outputs.push_back(file_record(config_.out_dir, out_path("train_real6.ply")));
    rec.outputs.push_back(
        file_record(config_.out_dir, out_path("class_histogram_real6.csv")));
  }

  if (config_.post.tile_edge > 0.0) {
    fs::create_directories(out_path("tiles"));
    std::vector<Tile> tiles = tile_blocks(train, config_.post.tile_edge);
    json tile_index = json::array();
    char name[48];
    size_t written = 0;
    for (size_t t = 0; t < tiles.size(); ++t) {
      if (tiles[t].points.empty()) continue;
      std::snprintf(name, sizeof(name), "tiles/block_%03zu.ply", t);
      save_cloud_ply(tiles[t].points, out_path(name));
      tile_index.push_back({{"file", name},
                            {"lo", {tiles[t].block_lo.x, tiles[t].block_lo.y}},
                            {"hi", {tiles[t].block_hi.x, tiles[t].block_hi.y}},
                            {"points", tiles[t].points.size()}});
      ++written;
    }
    {
      std::ofstream f(out_path("tiles/tiles.json"));
      f << tile_index.dump(1) << "\n";
    }
    manifest_.audit["tiles_written"] = written;
    rec.outputs.push_back(file_record(config_.out_dir, out_path("tiles/tiles.json")));
  }

  rec.seconds = timer.seconds();
  record(std::move(rec));
}

void Pipeline::eval() {
  StageTimer timer;
  StageRecord rec{"eval", {}, {}, 0.0};
  if (!config_.eval)
    throw std::invalid_argument("eval: config has no eval block (gt/pred paths)");
  const EvalConfig& e = *config_.eval;

  auto load_any = [](const std::string& path) {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".ply")
      return load_cloud_ply(path);
    return load_cloud_txt(path);
  };
  LabeledPointCloud gt = load_any(e.gt_path);
  LabeledPointCloud pred = load_any(e.pred_path);
  rec.inputs.push_back({e.gt_path, sha256_file(e.gt_path)});
  rec.inputs.push_back({e.pred_path, sha256_file(e.pred_path)});
  if (gt.size() != pred.size())
    throw std::runtime_error("eval: gt and pred point counts differ");

  SegmentationReport report;
  size_t k = e.taxonomy == "real6" ? classes::real6::kCount : classes::kCount;
  if (e.taxonomy == "real6")
    for (auto n : classes::real6::kNames) report.class_names.emplace_back(n);
  else
    for (auto n : classes::kNames) report.class_names.emplace_back(n);

  report.semantic = semantic_scores(confusion(gt.semantic, pred.semantic, k));

  if (!e.pred_instances.empty()) {
    std::ifstream f(e.pred_instances);
    if (!f) throw std::runtime_error("eval: cannot read " + e.pred_instances);
    json pj = json::parse(f);
    std::vector<InstancePrediction> preds;
    for (const auto& item : pj) {
      InstancePrediction p;
      p.class_id = item.at("class_id");
      p.confidence = item.at("confidence");
      for (const auto& idx : item.at("indices")) p.indices.push_back(idx.get<uint32_t>());
      preds.push_back(std::move(p));
    }
    ApOptions opts;
    opts.point_count = gt.size();
    report.instances = instance_ap(gt_instances_from_labels(gt.semantic, gt.instance),
                                   preds, opts);
    for (int i = 0; i < classes::kInstanceCapableCount; ++i)
      report.instance_class_names.emplace_back(classes::kNames[i]);
    rec.inputs.push_back({e.pred_instances, sha256_file(e.pred_instances)});
  }

  save_report_csv(report, out_path("report.csv"));
  save_report_json(report, out_path("report.json"));
  manifest_.audit["miou"] = report.semantic.miou;
  manifest_.audit["oacc"] = report.semantic.oacc;

  rec.outputs.push_back(file_record(config_.out_dir, out_path("report.csv")));
  rec.outputs.push_back(file_record(config_.out_dir, out_path("report.json")));
  rec.seconds = timer.seconds();
  record(std::move(rec));
}

void Pipeline::run_all() {
  gen_scene();
  plan_flight();
  render_images();
  reconstruct();
  annotate();
  postprocess();
  if (config_.eval) eval();
  write_manifest();
}

const std::vector<std::string>& Pipeline::stage_names() {
  static const std::vector<std::string> names = {
      "gen-scene", "plan-flight", "render", "reconstruct",
      "annotate",  "postprocess", "eval",   "all"};
  return names;
}

void Pipeline::run_stage(const std::string& name) {
  if (name == "gen-scene") gen_scene();
  else if (name == "plan-flight") plan_flight();
  else if (name == "render") render_images();
  else if (name == "reconstruct") reconstruct();
  else if (name == "annotate") annotate();
  else if (name == "postprocess") postprocess();
  else if (name == "eval") eval();
  else if (name == "all") { run_all(); return; }
  else throw std::invalid_argument("unknown stage '" + name + "'");
  write_manifest();
}

void Pipeline::write_manifest() const {
  manifest_.save((fs::path(config_.out_dir) / "manifest.json").string());
}

}  // namespace aerogen
