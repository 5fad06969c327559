#pragma once

#include <string>
#include <vector>

#include "aerogen/config.hpp"
#include "aerogen/manifest.hpp"

namespace aerogen {

// Stage orchestration. Every stage loads its inputs from and persists its
// outputs to the configured output directory, so any stage can resume from a
// previous run's artifacts. No stage writes outside out_dir.
class Pipeline {
 public:
  explicit Pipeline(RunConfig config);

  void gen_scene();
  void plan_flight();
  void render_images();
  void reconstruct();
  void annotate();
  void postprocess();
  void eval();
  void run_all();

  // Runs one stage by its CLI name; throws std::invalid_argument on unknown.
  void run_stage(const std::string& name);
  static const std::vector<std::string>& stage_names();

  void write_manifest() const;
  const RunManifest& manifest() const { return manifest_; }
  std::string out_path(const std::string& rel) const;

 private:
  struct StageTimer;
  void record(StageRecord record);

  RunConfig config_;
  RunManifest manifest_;
};

}  // namespace aerogen
