#include "gsmodac/env.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace gsmodac {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point from) {
  return std::chrono::duration<double>(Clock::now() - from).count();
}

}  // namespace

double reward_from_hv(double hv_current, double hv_best, double hv_initial, double hv_ideal) {
  if (!(hv_current > hv_best)) return 0.0;
  const double denom = hv_ideal - hv_initial;
  if (denom < 1e-12) return 0.0;
  const double delta_current = 100.0 * (hv_current - hv_initial) / denom;
  const double delta_best = 100.0 * (hv_best - hv_initial) / denom;
  return delta_current * delta_current - delta_best * delta_best;
}

std::vector<double> map_action(std::span<const double> action,
                               std::span<const ParamRange> ranges) {
  if (action.size() != ranges.size()) {
    throw std::invalid_argument("map_action: dimension mismatch");
  }
  std::vector<double> out(action.size());
  for (std::size_t i = 0; i < action.size(); ++i) {
    const double a = std::clamp(action[i], -1.0, 1.0);
    out[i] = ranges[i].low + (a + 1.0) / 2.0 * (ranges[i].high - ranges[i].low);
  }
  return out;
}

EpisodeEnv::EpisodeEnv(EnvConfig cfg, std::vector<const Instance*> pool)
    : cfg_(cfg), pool_(std::move(pool)) {
  if (pool_.empty()) throw std::invalid_argument("episode env: empty instance pool");
}

int EpisodeEnv::action_dim() const { return gsmodac::action_dim(cfg_.algorithm); }

StateGraph EpisodeEnv::current_graph() {
  const auto t0 = Clock::now();
  StateGraph g = build_state_graph(run_->population_objectives(), ctx_, run_->generation(),
                                   static_cast<std::size_t>(cfg_.budget));
  if (profile_) profile_->state_graph_s += elapsed_s(t0);
  return g;
}

StateGraph EpisodeEnv::reset_next(Rng& rng) {
  const Instance* inst = pool_.size() == 1 ? pool_.front() : pool_[rng.below(pool_.size())];
  const auto meta = inst->meta_for(cfg_.objective_set);
  if (!meta) {
    throw std::runtime_error("episode env: instance has no bootstrapped meta for objective set '" +
                             to_string(cfg_.objective_set) + "'");
  }

  run_ = make_run(*inst, cfg_.algorithm, cfg_.objective_set);
  run_->init(cfg_.population_size, rng);

  const auto initial_objs = run_->population_objectives();
  ctx_ = NormalizationContext::from_initial(initial_objs);

  // The stored ideal approximates the attainable minimum; clip it below the
  // first generation so hv_ideal >= hv_initial holds.
  HvFrame frame;
  frame.nadir = run_->nadir();
  frame.ideal = meta->ideal_point;
  for (std::size_t i = 0; i < frame.ideal.size(); ++i) {
    frame.ideal[i] = std::min(frame.ideal[i], ctx_.best_so_far[i]);
  }
  run_->set_frame(frame);
  hv_ideal_ = frame.measure(std::vector<ObjectiveVector>{frame.ideal});

  done_ = cfg_.budget <= 0;
  return current_graph();
}

StepResult EpisodeEnv::step(std::span<const double> action, Rng& rng) {
  if (done_) throw std::logic_error("episode env: step after episode end");
  const auto params = map_action(action, run_->param_ranges());

  const double hv_best_before = run_->hv_best();
  const double hv_s_before = run_->hv_seconds();
  const auto t0 = Clock::now();
  run_->step(params, rng);
  if (profile_) {
    const double hv_delta = run_->hv_seconds() - hv_s_before;
    profile_->hypervolume_s += hv_delta;
    profile_->ea_generation_s += elapsed_s(t0) - hv_delta;
  }
  const double reward =
      reward_from_hv(run_->hv_last(), hv_best_before, run_->hv_initial(), hv_ideal_);

  ctx_.update(run_->population_objectives());
  StepResult result;
  result.state = current_graph();
  result.reward = reward;
  done_ = run_->generation() >= static_cast<std::size_t>(cfg_.budget);
  result.done = done_;
  return result;
}

double EpisodeEnv::delta_best() const {
  if (!run_) return 0.0;
  const double denom = hv_ideal_ - run_->hv_initial();
  if (denom < 1e-12) return 0.0;
  return 100.0 * (run_->hv_best() - run_->hv_initial()) / denom;
}

InstanceMeta bootstrap_instance_meta(const Instance& inst, TargetAlgorithm algo,
                                     ObjectiveSet set, std::uint64_t seed, int population_size,
                                     int budget) {
  InstanceMeta meta;
  meta.source_seed = seed;
  meta.algorithm = to_string(algo);

  // Reference point: worst of generation 0 of the canonical seed-0 run.
  {
    auto run = make_run(inst, algo, set);
    Rng rng(derive_seed(0, {0x626f6f74ULL, inst.seed}));
    run->init(population_size, rng);
    meta.reference_point = run->nadir();
  }

  // Ideal point: component-wise best observed over a doubled-budget vanilla
  // run. Every per-coordinate minimum survives in the archive.
  {
    auto run = make_run(inst, algo, set);
    Rng rng(derive_seed(seed, {0x626f6f74ULL, inst.seed, 1}));
    run->init(population_size, rng);
    const auto params = run->vanilla_params();
    for (int g = 0; g < 2 * budget; ++g) run->step(params, rng);
    const auto archive = run->archive_objectives();
    meta.ideal_point = archive.front();
    for (const auto& v : archive) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        meta.ideal_point[i] = std::min(meta.ideal_point[i], v[i]);
      }
    }
  }
  for (std::size_t i = 0; i < meta.ideal_point.size(); ++i) {
    meta.ideal_point[i] = std::min(meta.ideal_point[i], meta.reference_point[i]);
  }
  return meta;
}

EpisodeResult run_episode(const Instance& inst, const EnvConfig& cfg, const PolicyNet* policy,
                          std::span<const double> static_params, std::uint64_t seed,
                          bool sample_actions, EpisodeProfile* profile) {
  const auto t_start = Clock::now();
  EpisodeEnv env(cfg, {&inst});
  env.set_profile(profile);
  Rng rng(seed);

  if (policy != nullptr && policy->cfg.action_dim != env.action_dim()) {
    throw std::invalid_argument("run_episode: checkpoint action_dim does not match algorithm");
  }
  if (policy != nullptr && policy->cfg.in_dim != objective_count(cfg.objective_set)) {
    throw std::invalid_argument("run_episode: checkpoint in_dim does not match objective set");
  }

  StateGraph state = env.reset_next(rng);

  EpisodeResult result;
  result.hv_best_trace.reserve(static_cast<std::size_t>(cfg.budget));
  while (!env.done()) {
    std::vector<double> action;
    if (policy != nullptr) {
      const auto t0 = Clock::now();
      const PolicyOutput out = policy_forward(*policy, state, nullptr);
      if (profile) profile->policy_inference_s += elapsed_s(t0);
      action = out.action_mean;
      if (sample_actions) {
        for (std::size_t i = 0; i < action.size(); ++i) {
          action[i] += std::exp(policy->log_std[i]) * rng.normal();
        }
      }
    } else {
      // Static parameters arrive in raw parameter space; invert the affine
      // map so env.step lands exactly on them.
      const auto ranges = env.run().param_ranges();
      if (static_params.size() != ranges.size()) {
        throw std::invalid_argument("run_episode: static parameter count mismatch");
      }
      action.resize(ranges.size());
      for (std::size_t i = 0; i < ranges.size(); ++i) {
        const double span = ranges[i].high - ranges[i].low;
        action[i] = span > 0.0 ? 2.0 * (static_params[i] - ranges[i].low) / span - 1.0 : 0.0;
      }
    }

    StepResult sr = env.step(action, rng);
    result.total_reward += sr.reward;
    result.hv_best_trace.push_back(env.run().hv_best());
    state = std::move(sr.state);
  }
  result.delta_best = env.delta_best();
  result.final_front = env.run().archive_objectives();
  if (profile) {
    profile->total_s = elapsed_s(t_start);
    profile->generations = cfg.budget;
  }
  return result;
}

}  // namespace gsmodac
