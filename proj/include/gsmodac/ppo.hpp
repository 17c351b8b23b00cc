#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gsmodac/env.hpp"
#include "gsmodac/neural.hpp"

namespace gsmodac {

struct Transition {
  StateGraph state;
  std::vector<double> action;  // pre-clamp Gaussian sample
  double log_prob = 0.0;       // pre-clamp density
  double reward = 0.0;
  double value = 0.0;
  bool done = false;
};

// Contiguous rollout from one environment stream; bootstrap_value is the
// critic estimate of the state after the last transition (0 if done).
struct Trajectory {
  std::vector<Transition> steps;
  double bootstrap_value = 0.0;
  std::vector<double> episode_returns;  // completed episodes only
  std::vector<double> episode_deltas;   // final normalized improvements
};

struct PpoConfig {
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_ratio = 0.2;
  double learning_rate = 3e-4;
  int update_epochs = 10;
  int minibatch_size = 64;
  int steps_per_epoch = 500;
  double value_coef = 0.5;
  double entropy_coef = 0.0;
  int num_parallel_envs = 5;

  void validate() const;
};

double gaussian_log_prob(std::span<const double> action, std::span<const double> mean,
                         std::span<const double> log_std);

// Rolls one environment for `steps` transitions, sampling actions from the
// policy's Gaussian (log-probabilities recorded pre-clamp) and auto-
// resetting finished episodes.
Trajectory collect_trajectory(const PolicyNet& policy, EnvInterface& env, int steps, Rng& rng);

// GAE(gamma, lambda) advantages and returns for one trajectory.
void compute_gae(const Trajectory& traj, double gamma, double lambda,
                 std::vector<double>& advantages, std::vector<double>& returns);

struct UpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
};

// Clipped-surrogate PPO update over the gathered trajectories; advantages
// are normalized per batch. Throws on non-finite losses.
UpdateStats ppo_update(PolicyNet& policy, AdamState& adam,
                       const std::vector<Trajectory>& trajectories, const PpoConfig& cfg,
                       Rng& rng);

struct TrainResult {
  int epochs_run = 0;
  long long total_steps = 0;
  std::string final_checkpoint;
};

struct TrainerOptions {
  PpoConfig ppo;
  long long total_steps = 50000;
  std::uint64_t master_seed = 0;
  int checkpoint_every = 10;  // epochs
  std::string checkpoint_dir;
  std::string log_path;       // JSON lines, one per epoch
  std::string resume_from;    // optional trainer checkpoint
  int threads = 1;
};

// Epoch-driven PPO training over a factory of environments (one per
// parallel stream). Environment and update randomness is re-derived from
// (master_seed, epoch, stream), so resuming from a checkpoint replays the
// exact run.
TrainResult train_policy(PolicyNet& policy,
                         const std::function<std::unique_ptr<EnvInterface>(int)>& env_factory,
                         const TrainerOptions& opts);

// Trainer checkpoint = policy block + optimizer state + epoch counter.
void save_trainer_checkpoint(const PolicyNet& net, const AdamState& adam, int next_epoch,
                             std::uint64_t master_seed, const std::string& path);
struct TrainerCheckpoint {
  PolicyNet policy;
  AdamState adam;
  int next_epoch = 0;
  std::uint64_t master_seed = 0;
};
TrainerCheckpoint load_trainer_checkpoint(const std::string& path);

}  // namespace gsmodac
