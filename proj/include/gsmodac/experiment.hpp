#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsmodac/fjsp.hpp"
#include "gsmodac/ppo.hpp"

namespace gsmodac {

// Full experiment description; the CLI config file carries this shape as
// JSON. Validation names the offending field.
struct ExperimentConfig {
  std::string problem = "fjsp";        // fjsp | cvrp
  std::string objective_set = "bi";    // bi | tri | penta
  std::string algorithm = "nsga2";     // nsga2 | mopso
  int population_size = 50;
  int generations = 50;                // per episode
  bool budget_feature = true;
  int gcn_layers = 2;
  int hidden = 64;
  std::uint64_t seed = 0;
  long long total_steps = 50000;
  int checkpoint_every = 10;
  int threads = 1;
  PpoConfig ppo;
  std::string instances_path;          // manifest file or directory
  std::string output_dir;

  ObjectiveSet objectives() const { return objective_set_from_string(objective_set); }
  void validate() const;
};

ExperimentConfig experiment_config_from_json_file(const std::string& path);
ExperimentConfig experiment_config_from_json_text(const std::string& text);
std::string experiment_config_to_json_text(const ExperimentConfig& cfg);

// Train/test file lists resolved relative to the manifest location.
struct InstanceManifest {
  std::vector<std::string> train;
  std::vector<std::string> test;
};

InstanceManifest load_manifest(const std::string& path_or_dir);
void save_manifest(const InstanceManifest& manifest, const std::string& path);

}  // namespace gsmodac
