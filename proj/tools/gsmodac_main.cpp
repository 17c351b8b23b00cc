#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gsmodac/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"GS-MODAC: graph-supported dynamic algorithm configuration for "
               "multi-objective evolutionary algorithms"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::uint64_t global_seed = 0;
  std::string config_path;
  int threads = 1;
  app.add_option("--seed", global_seed, "Master seed");
  app.add_option("--config", config_path, "Experiment config JSON");
  app.add_option("--threads", threads, "Worker threads");

  gsmodac::GenerateArgs gen;
  auto* c_gen = app.add_subcommand("generate", "Generate problem instances");
  c_gen->add_option("--problem", gen.problem, "fjsp | cvrp")->check(CLI::IsMember({"fjsp", "cvrp"}));
  c_gen->add_option("--count", gen.count, "Number of instances");
  c_gen->add_option("--jobs", gen.num_jobs, "FJSP jobs");
  c_gen->add_option("--machines", gen.num_machines, "FJSP machines");
  c_gen->add_option("--customers", gen.num_customers, "CVRP customers");
  c_gen->add_option("--out", gen.out_dir, "Output directory")->required();

  gsmodac::BootstrapArgs boot;
  auto* c_boot = app.add_subcommand("bootstrap", "Attach reference/ideal meta to instances");
  c_boot->add_option("--instances", boot.instances, "Manifest file or directory")->required();
  c_boot->add_option("--split", boot.split, "train | test | all");
  c_boot->add_option("--algorithm", boot.algorithm, "nsga2 | mopso");
  c_boot->add_option("--objectives", boot.objective_set, "bi | tri | penta");
  c_boot->add_option("--population", boot.population_size, "Population size");
  c_boot->add_option("--generations", boot.generations, "Episode budget (doubled internally)");
  c_boot->add_flag("--force", boot.force, "Re-bootstrap even if meta exists");

  std::string resume_from;
  auto* c_train = app.add_subcommand("train", "Train the GS-MODAC policy (needs --config)");
  c_train->add_option("--resume", resume_from, "Trainer checkpoint to resume from");

  gsmodac::EvaluateArgs eval;
  auto* c_eval = app.add_subcommand("evaluate", "Evaluate methods on test instances");
  c_eval->add_option("--instances", eval.instances, "Manifest file or directory")->required();
  c_eval->add_option("--split", eval.split, "train | test | all");
  c_eval->add_option("--method", eval.methods,
                     "Method: 'static' or a checkpoint path (repeatable)")->required();
  c_eval->add_option("--runs", eval.runs, "Runs per instance");
  c_eval->add_option("--objectives", eval.objective_set, "bi | tri | penta");
  c_eval->add_option("--algorithm", eval.algorithm, "nsga2 | mopso");
  c_eval->add_option("--population", eval.population_size, "Population size");
  c_eval->add_option("--generations", eval.generations, "Generations per run");
  c_eval->add_flag("--igd", eval.with_igd, "Also report IGD/IGD+ vs pooled fronts");
  c_eval->add_flag("--traces", eval.traces, "Write per-generation hv_best traces");
  c_eval->add_flag("--sample-actions", eval.sample_actions,
                   "Sample policy actions instead of using the mean");
  c_eval->add_option("--out", eval.out_dir, "Output directory for CSV/JSON tables");

  gsmodac::ProfileArgs prof;
  auto* c_prof = app.add_subcommand("profile", "Per-component timing of one episode");
  c_prof->add_option("--checkpoint", prof.checkpoint, "Checkpoint (omit for static run)");
  c_prof->add_option("--instance", prof.instance, "Instance file")->required();
  c_prof->add_option("--objectives", prof.objective_set, "bi | tri | penta");
  c_prof->add_option("--algorithm", prof.algorithm, "nsga2 | mopso");
  c_prof->add_option("--population", prof.population_size, "Population size");
  c_prof->add_option("--generations", prof.generations, "Generations");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_gen->parsed()) {
      gen.seed = global_seed;
      gsmodac::cmd_generate(gen, std::cout, std::cerr);
    } else if (c_boot->parsed()) {
      boot.seed = global_seed;
      boot.threads = threads;
      gsmodac::cmd_bootstrap(boot, std::cout, std::cerr);
    } else if (c_train->parsed()) {
      if (config_path.empty()) {
        throw std::invalid_argument("train: --config is required");
      }
      gsmodac::ExperimentConfig cfg = gsmodac::experiment_config_from_json_file(config_path);
      if (app.count("--seed")) cfg.seed = global_seed;
      if (app.count("--threads")) cfg.threads = threads;
      gsmodac::cmd_train(cfg, resume_from, std::cout, std::cerr);
    } else if (c_eval->parsed()) {
      eval.seed = global_seed;
      eval.threads = threads;
      gsmodac::cmd_evaluate(eval, std::cout, std::cerr);
    } else if (c_prof->parsed()) {
      prof.seed = global_seed;
      gsmodac::cmd_profile(prof, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}
