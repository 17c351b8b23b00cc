#include "gsmodac/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gsmodac {

using nlohmann::json;
namespace fs = std::filesystem;

void ExperimentConfig::validate() const {
  if (problem != "fjsp" && problem != "cvrp") {
    throw std::invalid_argument("config.problem: must be 'fjsp' or 'cvrp'");
  }
  if (objective_set != "bi" && objective_set != "tri" && objective_set != "penta") {
    throw std::invalid_argument("config.objective_set: must be 'bi', 'tri' or 'penta'");
  }
  if (problem == "cvrp" && objective_set != "bi") {
    throw std::invalid_argument("config.objective_set: '" + objective_set +
                                "' is only valid with problem 'fjsp'");
  }
  if (algorithm != "nsga2" && algorithm != "mopso") {
    throw std::invalid_argument("config.algorithm: must be 'nsga2' or 'mopso'");
  }
  if (algorithm == "mopso" && problem != "cvrp") {
    throw std::invalid_argument("config.algorithm: 'mopso' is only valid with problem 'cvrp'");
  }
  if (population_size < 1) throw std::invalid_argument("config.population_size: must be >= 1");
  if (generations < 1) throw std::invalid_argument("config.generations: must be >= 1");
  if (gcn_layers != 1 && gcn_layers != 2) {
    throw std::invalid_argument("config.gcn_layers: must be 1 or 2");
  }
  if (hidden < 1) throw std::invalid_argument("config.hidden: must be >= 1");
  if (total_steps < 1) throw std::invalid_argument("config.total_steps: must be >= 1");
  if (threads < 1) throw std::invalid_argument("config.threads: must be >= 1");
  ppo.validate();
}

namespace {

void read_ppo(const json& j, PpoConfig& ppo) {
  ppo.gamma = j.value("gamma", ppo.gamma);
  ppo.gae_lambda = j.value("gae_lambda", ppo.gae_lambda);
  ppo.clip_ratio = j.value("clip_ratio", ppo.clip_ratio);
  ppo.learning_rate = j.value("learning_rate", ppo.learning_rate);
  ppo.update_epochs = j.value("update_epochs", ppo.update_epochs);
  ppo.minibatch_size = j.value("minibatch_size", ppo.minibatch_size);
  ppo.steps_per_epoch = j.value("steps_per_epoch", ppo.steps_per_epoch);
  ppo.value_coef = j.value("value_coef", ppo.value_coef);
  ppo.entropy_coef = j.value("entropy_coef", ppo.entropy_coef);
  ppo.num_parallel_envs = j.value("num_parallel_envs", ppo.num_parallel_envs);
}

json ppo_to_json(const PpoConfig& ppo) {
  return json{{"gamma", ppo.gamma},
              {"gae_lambda", ppo.gae_lambda},
              {"clip_ratio", ppo.clip_ratio},
              {"learning_rate", ppo.learning_rate},
              {"update_epochs", ppo.update_epochs},
              {"minibatch_size", ppo.minibatch_size},
              {"steps_per_epoch", ppo.steps_per_epoch},
              {"value_coef", ppo.value_coef},
              {"entropy_coef", ppo.entropy_coef},
              {"num_parallel_envs", ppo.num_parallel_envs}};
}

}  // namespace

ExperimentConfig experiment_config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  cfg.problem = j.value("problem", cfg.problem);
  cfg.objective_set = j.value("objective_set", cfg.objective_set);
  cfg.algorithm = j.value("algorithm", cfg.algorithm);
  cfg.population_size = j.value("population_size", cfg.population_size);
  cfg.generations = j.value("generations", cfg.generations);
  cfg.budget_feature = j.value("budget_feature", cfg.budget_feature);
  cfg.gcn_layers = j.value("gcn_layers", cfg.gcn_layers);
  cfg.hidden = j.value("hidden", cfg.hidden);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.total_steps = j.value("total_steps", cfg.total_steps);
  cfg.checkpoint_every = j.value("checkpoint_every", cfg.checkpoint_every);
  cfg.threads = j.value("threads", cfg.threads);
  if (j.contains("ppo")) read_ppo(j.at("ppo"), cfg.ppo);
  if (j.contains("paths")) {
    cfg.instances_path = j.at("paths").value("instances", cfg.instances_path);
    cfg.output_dir = j.at("paths").value("output", cfg.output_dir);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig experiment_config_from_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return experiment_config_from_json_text(buf.str());
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::string experiment_config_to_json_text(const ExperimentConfig& cfg) {
  json j{{"problem", cfg.problem},
         {"objective_set", cfg.objective_set},
         {"algorithm", cfg.algorithm},
         {"population_size", cfg.population_size},
         {"generations", cfg.generations},
         {"budget_feature", cfg.budget_feature},
         {"gcn_layers", cfg.gcn_layers},
         {"hidden", cfg.hidden},
         {"seed", cfg.seed},
         {"total_steps", cfg.total_steps},
         {"checkpoint_every", cfg.checkpoint_every},
         {"threads", cfg.threads},
         {"ppo", ppo_to_json(cfg.ppo)},
         {"paths", json{{"instances", cfg.instances_path}, {"output", cfg.output_dir}}}};
  return j.dump(2) + "\n";
}

InstanceManifest load_manifest(const std::string& path_or_dir) {
  fs::path path(path_or_dir);
  if (fs::is_directory(path)) path /= "manifest.json";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open manifest: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": manifest parse error: " + e.what());
  }
  InstanceManifest m;
  const fs::path base = path.parent_path();
  for (const auto& f : j.at("train")) m.train.push_back((base / f.get<std::string>()).string());
  for (const auto& f : j.at("test")) m.test.push_back((base / f.get<std::string>()).string());
  return m;
}

void save_manifest(const InstanceManifest& manifest, const std::string& path) {
  // Stored entries are relative to the manifest directory.
  auto basename = [](const std::string& p) { return fs::path(p).filename().string(); };
  json train = json::array();
  json test = json::array();
  for (const auto& f : manifest.train) train.push_back(basename(f));
  for (const auto& f : manifest.test) test.push_back(basename(f));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open manifest for writing: " + path);
  out << json{{"train", std::move(train)}, {"test", std::move(test)}}.dump(2) << "\n";
}

}  // namespace gsmodac
