#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "aerogen/pipeline.hpp"

// Exit codes: 0 success, 1 validation error, 2 stage failure.

int main(int argc, char** argv) {
  CLI::App app{"Synthetic aerial photogrammetry point cloud pipeline"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string out_dir;
  std::string stage;
  uint64_t seed = 0;
  bool seed_set = false;
  int workers = -1;
  bool unsafe_params = false;

  app.add_option("--config", config_path, "Run configuration JSON");
  app.add_option("--seed", seed, "Root seed (overrides config)")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("--out", out_dir, "Output directory (overrides config)");
  app.add_option("--workers", workers, "Worker threads (0 = all cores)");
  app.add_option("--stage", stage, "Stage to run (alternative to a subcommand)");
  app.add_flag("--unsafe-params", unsafe_params, "Lift the altitude band validation");

  for (const std::string& name : aerogen::Pipeline::stage_names()) {
    auto* sub = app.add_subcommand(name);
    sub->callback([&stage, name] { stage = name; });
  }

  CLI11_PARSE(app, argc, argv);

  if (stage.empty()) {
    std::fprintf(stderr, "error: no stage given (subcommand or --stage)\n");
    return 1;
  }

  aerogen::RunConfig config;
  try {
    if (!config_path.empty()) config = aerogen::RunConfig::load(config_path);
    if (seed_set) config.seed = seed;
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (workers >= 0) config.workers = workers;
    if (unsafe_params) config.unsafe_params = true;
    config.validate();
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return 1;
  }

  try {
    aerogen::Pipeline pipeline(config);
    try {
      pipeline.run_stage(stage);
    } catch (const std::invalid_argument& e) {
      std::fprintf(stderr, "validation error in stage '%s': %s\n", stage.c_str(), e.what());
      pipeline.write_manifest();
      return 1;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "stage '%s' failed: %s\n", stage.c_str(), e.what());
      pipeline.write_manifest();  // manifest-so-far
      return 2;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
