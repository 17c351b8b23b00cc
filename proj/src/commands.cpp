#include "gsmodac/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gsmodac/env.hpp"
#include "gsmodac/parallel.hpp"
#include "gsmodac/ppo.hpp"

namespace gsmodac {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void cmd_generate(const GenerateArgs& args, std::ostream& out, std::ostream& err) {
  if (args.count < 1) throw std::invalid_argument("generate: count must be >= 1");
  if (args.out_dir.empty()) throw std::invalid_argument("generate: missing output directory");
  fs::create_directories(args.out_dir);

  InstanceManifest manifest;
  for (int i = 0; i < args.count; ++i) {
    Instance inst;
    inst.kind = args.problem;
    inst.seed = derive_seed(args.seed, {0x67656eULL, static_cast<std::uint64_t>(i)});
    if (args.problem == "fjsp") {
      inst.data = generate_fjsp(inst.seed, args.num_jobs, args.num_machines);
    } else if (args.problem == "cvrp") {
      inst.data = generate_cvrp(inst.seed, args.num_customers);
    } else {
      throw std::invalid_argument("generate: unknown problem '" + args.problem + "'");
    }
    char name[64];
    std::snprintf(name, sizeof(name), "instance_%04d.json", i);
    const std::string path = (fs::path(args.out_dir) / name).string();
    save_instance(inst, path);
    if (i < args.count / 2 || args.count == 1) {
      manifest.train.push_back(path);
    } else {
      manifest.test.push_back(path);
    }
  }
  if (manifest.test.empty()) {
    err << "warning: degenerate split, test manifest is empty\n";
  }
  save_manifest(manifest, (fs::path(args.out_dir) / "manifest.json").string());
  out << "generated " << args.count << " " << args.problem << " instances in " << args.out_dir
      << " (" << manifest.train.size() << " train / " << manifest.test.size() << " test)\n";
}

namespace {

std::vector<std::string> select_split(const InstanceManifest& m, const std::string& split) {
  if (split == "train") return m.train;
  if (split == "test") return m.test;
  if (split == "all") {
    std::vector<std::string> all = m.train;
    all.insert(all.end(), m.test.begin(), m.test.end());
    return all;
  }
  throw std::invalid_argument("unknown split '" + split + "'");
}

}  // namespace

void cmd_bootstrap(const BootstrapArgs& args, std::ostream& out, std::ostream& err) {
  const auto files = select_split(load_manifest(args.instances), args.split);
  if (files.empty()) throw std::runtime_error("bootstrap: no instances in split");
  const ObjectiveSet set = objective_set_from_string(args.objective_set);
  const std::string meta_key = to_string(set);

  std::vector<std::string> notes(files.size());
  parallel_for(files.size(), args.threads, [&](std::size_t i) {
    Instance inst;
    try {
      inst = load_instance(files[i]);
    } catch (const std::exception& e) {
      if (!args.force) throw;
      // --force repairs files whose meta block no longer parses
      std::ifstream in(files[i], std::ios::binary);
      std::ostringstream buf;
      buf << in.rdbuf();
      json j = json::parse(buf.str());
      j.erase("meta");
      inst = instance_from_json(j.dump());
    }
    if (!args.force && inst.meta.count(meta_key)) {
      notes[i] = files[i] + ": already bootstrapped, skipped";
      return;
    }
    const TargetAlgorithm algo = target_algorithm_for(inst, args.algorithm);
    const InstanceMeta meta = bootstrap_instance_meta(inst, algo, set, args.seed,
                                                      args.population_size, args.generations);
    inst.meta[meta_key] = meta;
    save_instance(inst, files[i]);
    notes[i] = files[i] + ": bootstrapped (" + meta_key + ", " + to_string(algo) + ")";
  });
  for (const auto& n : notes) out << n << "\n";
  (void)err;
}

std::string cmd_train(const ExperimentConfig& cfg, const std::string& resume_from,
                      std::ostream& out, std::ostream& err) {
  cfg.validate();
  if (cfg.output_dir.empty()) throw std::invalid_argument("config.paths.output: missing");
  if (cfg.instances_path.empty()) throw std::invalid_argument("config.paths.instances: missing");
  fs::create_directories(cfg.output_dir);

  const ObjectiveSet set = cfg.objectives();
  const auto train_files = load_manifest(cfg.instances_path).train;
  if (train_files.empty()) throw std::runtime_error("train: empty training split");

  auto instances = std::make_shared<std::vector<Instance>>();
  instances->reserve(train_files.size());
  for (const auto& f : train_files) instances->push_back(load_instance(f));
  for (std::size_t i = 0; i < instances->size(); ++i) {
    if ((*instances)[i].kind != cfg.problem) {
      throw std::runtime_error("train: instance kind '" + (*instances)[i].kind +
                               "' does not match config.problem '" + cfg.problem +
                               "': " + train_files[i]);
    }
    if (!(*instances)[i].meta_for(set)) {
      throw std::runtime_error("train: instance not bootstrapped for '" + cfg.objective_set +
                               "': " + train_files[i]);
    }
  }

  const TargetAlgorithm algo = target_algorithm_for(instances->front(), cfg.algorithm);
  EnvConfig env_cfg;
  env_cfg.algorithm = algo;
  env_cfg.objective_set = set;
  env_cfg.population_size = cfg.population_size;
  env_cfg.budget = cfg.generations;

  PolicyConfig pc;
  pc.in_dim = objective_count(set);
  pc.hidden = cfg.hidden;
  pc.gcn_layers = cfg.gcn_layers;
  pc.budget_feature = cfg.budget_feature;
  pc.action_dim = action_dim(algo);
  PolicyNet policy = make_policy(pc, derive_seed(cfg.seed, {0x696e6974ULL}));

  TrainerOptions opts;
  opts.ppo = cfg.ppo;
  opts.total_steps = cfg.total_steps;
  opts.master_seed = cfg.seed;
  opts.checkpoint_every = cfg.checkpoint_every;
  opts.checkpoint_dir = cfg.output_dir;
  opts.log_path = (fs::path(cfg.output_dir) / "train_log.jsonl").string();
  opts.resume_from = resume_from;
  opts.threads = cfg.threads;

  auto factory = [instances, env_cfg](int) -> std::unique_ptr<EnvInterface> {
    std::vector<const Instance*> pool;
    pool.reserve(instances->size());
    for (const auto& inst : *instances) pool.push_back(&inst);
    return std::make_unique<EpisodeEnv>(env_cfg, std::move(pool));
  };

  const TrainResult result = train_policy(policy, factory, opts);
  out << "trained " << result.epochs_run << " epochs (" << result.total_steps
      << " steps), final checkpoint: " << result.final_checkpoint << "\n";
  (void)err;
  return result.final_checkpoint;
}

namespace {

struct Method {
  std::string name;
  std::optional<PolicyNet> policy;  // nullopt => vanilla static parameters
};

std::string method_name_for(const std::string& spec, std::set<std::string>& used) {
  std::string base = spec == "static" ? "static" : fs::path(spec).stem().string();
  std::string name = base;
  int suffix = 1;
  while (!used.insert(name).second) name = base + "#" + std::to_string(++suffix);
  return name;
}

}  // namespace

EvalReport cmd_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err) {
  if (args.methods.empty()) throw std::invalid_argument("evaluate: no methods given");
  if (args.runs < 1) throw std::invalid_argument("evaluate: runs must be >= 1");
  const ObjectiveSet set = objective_set_from_string(args.objective_set);

  const auto files = select_split(load_manifest(args.instances), args.split);
  if (files.empty()) throw std::runtime_error("evaluate: no instances in split");

  std::vector<Instance> instances;
  instances.reserve(files.size());
  std::vector<InstanceMeta> metas;
  for (const auto& f : files) {
    instances.push_back(load_instance(f));
    const auto meta = instances.back().meta_for(set);
    if (!meta) {
      throw std::runtime_error("evaluate: instance not bootstrapped for '" +
                               args.objective_set + "': " + f);
    }
    metas.push_back(*meta);
  }
  const TargetAlgorithm algo = target_algorithm_for(instances.front(), args.algorithm);

  std::set<std::string> used_names;
  std::vector<Method> methods;
  for (const auto& spec : args.methods) {
    Method m;
    m.name = method_name_for(spec, used_names);
    if (spec != "static") {
      m.policy = load_checkpoint(spec);
      if (m.policy->cfg.action_dim != action_dim(algo)) {
        throw std::invalid_argument("evaluate: checkpoint '" + spec +
                                    "' action_dim does not match algorithm");
      }
      if (m.policy->cfg.in_dim != objective_count(set)) {
        throw std::invalid_argument("evaluate: checkpoint '" + spec +
                                    "' in_dim does not match objective set");
      }
    }
    methods.push_back(std::move(m));
  }

  EnvConfig env_cfg;
  env_cfg.algorithm = algo;
  env_cfg.objective_set = set;
  env_cfg.population_size = args.population_size;
  env_cfg.budget = args.generations;

  struct Job {
    std::size_t method;
    std::size_t instance;
    int run;
  };
  std::vector<Job> jobs;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (std::size_t i = 0; i < instances.size(); ++i) {
      for (int r = 0; r < args.runs; ++r) jobs.push_back({m, i, r});
    }
  }

  std::vector<EpisodeResult> results(jobs.size());
  parallel_for(jobs.size(), args.threads, [&](std::size_t k) {
    const Job& job = jobs[k];
    const Instance& inst = instances[job.instance];
    const Method& method = methods[job.method];
    const std::uint64_t seed =
        derive_seed(args.seed, {0x6576616cULL, inst.seed, static_cast<std::uint64_t>(job.run)});
    const auto vanilla = vanilla_params(algo);
    results[k] = run_episode(inst, env_cfg, method.policy ? &*method.policy : nullptr, vanilla,
                             seed, args.sample_actions, nullptr);
  });

  // Pooled per-instance reference fronts across every method and run.
  std::vector<std::vector<ObjectiveVector>> pooled(instances.size());
  if (args.with_igd) {
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      auto& pool = pooled[jobs[k].instance];
      pool.insert(pool.end(), results[k].final_front.begin(), results[k].final_front.end());
    }
    for (auto& pool : pooled) {
      const FrontPartition part = non_dominated_sort(pool);
      std::vector<ObjectiveVector> front;
      front.reserve(part.fronts[0].size());
      for (std::size_t i : part.fronts[0]) front.push_back(pool[i]);
      std::sort(front.begin(), front.end());
      front.erase(std::unique(front.begin(), front.end()), front.end());
      pool = std::move(front);
    }
  }

  EvalReport report;
  report.rows.reserve(jobs.size());
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const Job& job = jobs[k];
    EvalRow row;
    row.method = methods[job.method].name;
    row.instance = fs::path(files[job.instance]).filename().string();
    row.run = job.run;
    row.hv = hypervolume(results[k].final_front, metas[job.instance].reference_point);
    row.front_size = static_cast<int>(results[k].final_front.size());
    if (args.with_igd) {
      row.igd_value = igd(results[k].final_front, pooled[job.instance]);
      row.igd_plus_value = igd_plus(results[k].final_front, pooled[job.instance]);
    }
    report.rows.push_back(std::move(row));
  }

  for (std::size_t m = 0; m < methods.size(); ++m) {
    MethodAggregate agg;
    agg.method = methods[m].name;
    double sum = 0.0;
    double sum_sq = 0.0;
    double best = 0.0;
    double igd_sum = 0.0;
    double igdp_sum = 0.0;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      if (jobs[k].method != m) continue;
      const EvalRow& row = report.rows[k];
      sum += row.hv;
      sum_sq += row.hv * row.hv;
      best = agg.rows == 0 ? row.hv : std::max(best, row.hv);
      igd_sum += row.igd_value;
      igdp_sum += row.igd_plus_value;
      ++agg.rows;
    }
    const double n = static_cast<double>(agg.rows);
    agg.hv_mean = sum / n;
    agg.hv_max = best;
    agg.hv_std = std::sqrt(std::max(0.0, sum_sq / n - agg.hv_mean * agg.hv_mean));
    agg.igd_mean = igd_sum / n;
    agg.igd_plus_mean = igdp_sum / n;
    report.aggregates.push_back(agg);
  }

  if (!args.out_dir.empty()) {
    fs::create_directories(args.out_dir);
    std::ofstream csv(fs::path(args.out_dir) / "results.csv", std::ios::binary);
    if (!csv) throw std::runtime_error("evaluate: cannot write results.csv");
    csv << "method,instance,run,hv,front_size";
    if (args.with_igd) csv << ",igd,igd_plus";
    csv << "\n";
    for (const auto& row : report.rows) {
      csv << row.method << "," << row.instance << "," << row.run << "," << format_double(row.hv)
          << "," << row.front_size;
      if (args.with_igd) {
        csv << "," << format_double(row.igd_value) << "," << format_double(row.igd_plus_value);
      }
      csv << "\n";
    }

    json agg_json;
    agg_json["runs"] = args.runs;
    agg_json["instances"] = instances.size();
    agg_json["objective_set"] = args.objective_set;
    agg_json["algorithm"] = to_string(algo);
    json per_method = json::object();
    for (const auto& agg : report.aggregates) {
      json entry{{"rows", agg.rows},
                 {"hv", json{{"mean", agg.hv_mean}, {"max", agg.hv_max}, {"std", agg.hv_std}}}};
      if (args.with_igd) {
        entry["igd_mean"] = agg.igd_mean;
        entry["igd_plus_mean"] = agg.igd_plus_mean;
      }
      per_method[agg.method] = std::move(entry);
    }
    agg_json["methods"] = std::move(per_method);
    std::ofstream aggf(fs::path(args.out_dir) / "aggregates.json", std::ios::binary);
    aggf << agg_json.dump(2) << "\n";

    if (args.traces) {
      std::ofstream traces(fs::path(args.out_dir) / "traces.csv", std::ios::binary);
      traces << "method,instance,run,generation,hv_best\n";
      for (std::size_t k = 0; k < jobs.size(); ++k) {
        const Job& job = jobs[k];
        for (std::size_t g = 0; g < results[k].hv_best_trace.size(); ++g) {
          traces << methods[job.method].name << ","
                 << fs::path(files[job.instance]).filename().string() << "," << job.run << ","
                 << (g + 1) << "," << format_double(results[k].hv_best_trace[g]) << "\n";
        }
      }
    }
  }

  for (const auto& agg : report.aggregates) {
    out << agg.method << ": hv mean=" << format_double(agg.hv_mean)
        << " max=" << format_double(agg.hv_max) << " std=" << format_double(agg.hv_std);
    if (args.with_igd) {
      out << " igd=" << format_double(agg.igd_mean)
          << " igd+=" << format_double(agg.igd_plus_mean);
    }
    out << " (" << agg.rows << " rows)\n";
  }
  (void)err;
  return report;
}

void cmd_profile(const ProfileArgs& args, std::ostream& out, std::ostream& err) {
  Instance inst = load_instance(args.instance);
  const ObjectiveSet set = objective_set_from_string(args.objective_set);
  const TargetAlgorithm algo = target_algorithm_for(inst, args.algorithm);
  if (!inst.meta_for(set)) {
    throw std::runtime_error("profile: instance not bootstrapped for '" + args.objective_set +
                             "'");
  }

  std::optional<PolicyNet> policy;
  if (!args.checkpoint.empty()) {
    policy = load_checkpoint(args.checkpoint);
  }

  EnvConfig env_cfg;
  env_cfg.algorithm = algo;
  env_cfg.objective_set = set;
  env_cfg.population_size = args.population_size;
  env_cfg.budget = args.generations;

  EpisodeProfile profile;
  const auto vanilla = vanilla_params(algo);
  run_episode(inst, env_cfg, policy ? &*policy : nullptr, vanilla,
              derive_seed(args.seed, {0x70726f66ULL, inst.seed}), false, &profile);

  json j{{"total_s", profile.total_s},
         {"state_graph_s", profile.state_graph_s},
         {"policy_inference_s", profile.policy_inference_s},
         {"ea_generation_s", profile.ea_generation_s},
         {"hypervolume_s", profile.hypervolume_s},
         {"generations", profile.generations},
         {"method", policy ? "policy" : "static"}};
  out << j.dump(2) << "\n";
  (void)err;
}

}  // namespace gsmodac
