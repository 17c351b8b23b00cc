#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gsmodac/experiment.hpp"

namespace gsmodac {

struct GenerateArgs {
  std::string problem = "fjsp";
  int count = 200;
  int num_jobs = 5;
  int num_machines = 5;
  int num_customers = 100;
  std::uint64_t seed = 0;
  std::string out_dir;
};

// Writes count instances plus a half/half train/test manifest.
void cmd_generate(const GenerateArgs& args, std::ostream& out, std::ostream& err);

struct BootstrapArgs {
  std::string instances;  // manifest file or directory
  std::string split = "all";  // train | test | all
  std::string algorithm = "nsga2";
  std::string objective_set = "bi";
  std::uint64_t seed = 0;
  int population_size = 50;
  int generations = 50;
  bool force = false;
  int threads = 1;
};

void cmd_bootstrap(const BootstrapArgs& args, std::ostream& out, std::ostream& err);

// Trains per the experiment config; returns the final checkpoint path.
std::string cmd_train(const ExperimentConfig& cfg, const std::string& resume_from,
                      std::ostream& out, std::ostream& err);

struct EvaluateArgs {
  std::string instances;
  std::string split = "test";
  std::vector<std::string> methods;  // "static" or a checkpoint path
  int runs = 10;
  std::string objective_set = "bi";
  std::string algorithm = "nsga2";
  int population_size = 50;
  int generations = 50;
  std::uint64_t seed = 0;
  bool with_igd = false;
  bool traces = false;
  bool sample_actions = false;
  std::string out_dir;
  int threads = 1;
};

struct EvalRow {
  std::string method;
  std::string instance;
  int run = 0;
  double hv = 0.0;
  int front_size = 0;
  double igd_value = 0.0;
  double igd_plus_value = 0.0;
};

struct MethodAggregate {
  std::string method;
  double hv_mean = 0.0;
  double hv_max = 0.0;
  double hv_std = 0.0;
  double igd_mean = 0.0;
  double igd_plus_mean = 0.0;
  long long rows = 0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  std::vector<MethodAggregate> aggregates;
};

EvalReport cmd_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err);

struct ProfileArgs {
  std::string checkpoint;  // empty => static vanilla parameters
  std::string instance;
  std::string objective_set = "bi";
  std::string algorithm = "nsga2";
  int population_size = 50;
  int generations = 50;
  std::uint64_t seed = 0;
};

// Prints the per-component timing breakdown as JSON.
void cmd_profile(const ProfileArgs& args, std::ostream& out, std::ostream& err);

// Canonical float formatting for table outputs (shortest round-trip).
std::string format_double(double v);

}  // namespace gsmodac
