#include "gsmodac/ppo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace gsmodac {

namespace {
constexpr double kLogSqrt2Pi = 0.9189385332046727;  // log(sqrt(2*pi))
}

void PpoConfig::validate() const {
  if (!(clip_ratio > 0.0 && clip_ratio < 1.0)) {
    throw std::invalid_argument("ppo config: clip_ratio must be in (0,1)");
  }
  if (!(gamma > 0.0 && gamma <= 1.0) || !(gae_lambda > 0.0 && gae_lambda <= 1.0)) {
    throw std::invalid_argument("ppo config: gamma and gae_lambda must be in (0,1]");
  }
  if (learning_rate <= 0.0) throw std::invalid_argument("ppo config: nonpositive learning rate");
  if (update_epochs < 1 || minibatch_size < 1 || steps_per_epoch < 1 || num_parallel_envs < 1) {
    throw std::invalid_argument("ppo config: counts must be positive");
  }
}

double gaussian_log_prob(std::span<const double> action, std::span<const double> mean,
                         std::span<const double> log_std) {
  double lp = 0.0;
  for (std::size_t i = 0; i < action.size(); ++i) {
    const double std = std::exp(log_std[i]);
    const double z = (action[i] - mean[i]) / std;
    lp += -0.5 * z * z - log_std[i] - kLogSqrt2Pi;
  }
  return lp;
}

Trajectory collect_trajectory(const PolicyNet& policy, EnvInterface& env, int steps, Rng& rng) {
  Trajectory traj;
  if (steps <= 0) return traj;
  traj.steps.reserve(static_cast<std::size_t>(steps));
  StateGraph state = env.reset_next(rng);
  double episode_return = 0.0;

  for (int t = 0; t < steps; ++t) {
    const PolicyOutput out = policy_forward(policy, state, nullptr);
    std::vector<double> action(out.action_mean.size());
    for (std::size_t i = 0; i < action.size(); ++i) {
      action[i] = out.action_mean[i] + std::exp(policy.log_std[i]) * rng.normal();
    }
    const double log_prob = gaussian_log_prob(action, out.action_mean, policy.log_std);

    StepResult sr = env.step(action, rng);
    episode_return += sr.reward;

    Transition tr;
    tr.state = std::move(state);
    tr.action = std::move(action);
    tr.log_prob = log_prob;
    tr.reward = sr.reward;
    tr.value = out.value;
    tr.done = sr.done;
    traj.steps.push_back(std::move(tr));

    if (sr.done) {
      traj.episode_returns.push_back(episode_return);
      traj.episode_deltas.push_back(env.delta_best());
      episode_return = 0.0;
      state = env.reset_next(rng);
    } else {
      state = std::move(sr.state);
    }
  }

  if (!traj.steps.back().done) {
    traj.bootstrap_value = policy_forward(policy, state, nullptr).value;
  }
  return traj;
}

void compute_gae(const Trajectory& traj, double gamma, double lambda,
                 std::vector<double>& advantages, std::vector<double>& returns) {
  const std::size_t n = traj.steps.size();
  advantages.assign(n, 0.0);
  returns.assign(n, 0.0);
  double gae = 0.0;
  double next_value = traj.bootstrap_value;
  for (std::size_t i = n; i-- > 0;) {
    const Transition& tr = traj.steps[i];
    // done cuts both the bootstrap and the advantage chain at this step
    const double not_done = tr.done ? 0.0 : 1.0;
    const double delta = tr.reward + gamma * next_value * not_done - tr.value;
    gae = delta + gamma * lambda * not_done * gae;
    advantages[i] = gae;
    returns[i] = gae + tr.value;
    next_value = tr.value;
  }
}

UpdateStats ppo_update(PolicyNet& policy, AdamState& adam,
                       const std::vector<Trajectory>& trajectories, const PpoConfig& cfg,
                       Rng& rng) {
  cfg.validate();

  struct Sample {
    const Transition* tr;
    double advantage;
    double ret;
  };
  std::vector<Sample> batch;
  for (const auto& traj : trajectories) {
    std::vector<double> adv;
    std::vector<double> ret;
    compute_gae(traj, cfg.gamma, cfg.gae_lambda, adv, ret);
    for (std::size_t i = 0; i < traj.steps.size(); ++i) {
      batch.push_back({&traj.steps[i], adv[i], ret[i]});
    }
  }
  if (batch.empty()) throw std::invalid_argument("ppo_update: no transitions");

  if (batch.size() > 1) {
    double mean = 0.0;
    for (const auto& s : batch) mean += s.advantage;
    mean /= static_cast<double>(batch.size());
    double var = 0.0;
    for (const auto& s : batch) var += (s.advantage - mean) * (s.advantage - mean);
    var /= static_cast<double>(batch.size());
    const double std = std::sqrt(var) + 1e-8;
    for (auto& s : batch) s.advantage = (s.advantage - mean) / std;
  }

  const int action_dim = policy.cfg.action_dim;
  UpdateStats stats;
  long long stat_count = 0;
  long long clip_count = 0;

  std::vector<std::size_t> order(batch.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 0; epoch < cfg.update_epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.minibatch_size)) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.minibatch_size));
      const double inv_m = 1.0 / static_cast<double>(end - start);

      PolicyNet grads = zeros_like(policy);
      for (std::size_t k = start; k < end; ++k) {
        const Sample& s = batch[order[k]];
        ForwardCache cache;
        const PolicyOutput out = policy_forward(policy, s.tr->state, &cache);

        const double logp_new = gaussian_log_prob(s.tr->action, out.action_mean, policy.log_std);
        const double ratio = std::exp(logp_new - s.tr->log_prob);
        const double clipped =
            std::clamp(ratio, 1.0 - cfg.clip_ratio, 1.0 + cfg.clip_ratio);
        const double surr1 = ratio * s.advantage;
        const double surr2 = clipped * s.advantage;
        const double policy_loss = -std::min(surr1, surr2);
        const double value_err = out.value - s.ret;
        const double value_loss = value_err * value_err;
        double entropy = 0.0;
        for (int j = 0; j < action_dim; ++j) {
          entropy += policy.log_std[static_cast<std::size_t>(j)] + 0.5 + kLogSqrt2Pi;
        }

        if (!std::isfinite(policy_loss) || !std::isfinite(value_loss)) {
          std::ostringstream msg;
          msg << "ppo_update: non-finite loss (policy=" << policy_loss
              << ", value=" << value_loss << ", ratio=" << ratio << ")";
          throw std::runtime_error(msg.str());
        }

        stats.policy_loss += policy_loss;
        stats.value_loss += value_loss;
        stats.entropy += entropy;
        stats.approx_kl += s.tr->log_prob - logp_new;
        if (std::abs(ratio - 1.0) > cfg.clip_ratio) ++clip_count;
        ++stat_count;

        // d policy_loss / d logp = -A * ratio on the active unclipped branch.
        const bool unclipped_active = surr1 <= surr2;
        const double dloss_dlogp = unclipped_active ? -s.advantage * ratio : 0.0;

        std::vector<double> grad_mean(static_cast<std::size_t>(action_dim), 0.0);
        for (int j = 0; j < action_dim; ++j) {
          const auto ju = static_cast<std::size_t>(j);
          const double std_j = std::exp(policy.log_std[ju]);
          const double z = (s.tr->action[ju] - out.action_mean[ju]) / std_j;
          // d logp / d mean = z / std ; d logp / d log_std = z^2 - 1
          grad_mean[ju] = dloss_dlogp * (z / std_j) * inv_m;
          grads.log_std[ju] +=
              (dloss_dlogp * (z * z - 1.0) - cfg.entropy_coef) * inv_m;
        }
        const double grad_value = cfg.value_coef * 2.0 * value_err * inv_m;
        policy_backward(policy, cache, grad_mean, grad_value, grads);
      }
      adam_step(policy, grads, adam, cfg.learning_rate);
    }
  }

  const double inv = 1.0 / static_cast<double>(stat_count);
  stats.policy_loss *= inv;
  stats.value_loss *= inv;
  stats.entropy *= inv;
  stats.approx_kl *= inv;
  stats.clip_fraction = static_cast<double>(clip_count) * inv;
  return stats;
}

void save_trainer_checkpoint(const PolicyNet& net, const AdamState& adam, int next_epoch,
                             std::uint64_t master_seed, const std::string& path) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["policy"] = nlohmann::json::parse(policy_to_json_text(net));
  j["trainer"] = nlohmann::json{{"adam_m", adam.m},
                                {"adam_v", adam.v},
                                {"adam_t", adam.t},
                                {"next_epoch", next_epoch},
                                {"master_seed", master_seed}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
  out << j.dump() << "\n";
  if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

TrainerCheckpoint load_trainer_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": checkpoint parse error: " + e.what());
  }
  if (!j.contains("trainer")) {
    throw std::runtime_error(path + ": not a trainer checkpoint (missing trainer block)");
  }
  TrainerCheckpoint ck;
  ck.policy = policy_from_json_text(j.at("policy").dump());
  const auto& t = j.at("trainer");
  ck.adam.m = t.at("adam_m").get<std::vector<double>>();
  ck.adam.v = t.at("adam_v").get<std::vector<double>>();
  ck.adam.t = t.at("adam_t").get<long long>();
  ck.next_epoch = t.at("next_epoch").get<int>();
  ck.master_seed = t.at("master_seed").get<std::uint64_t>();
  return ck;
}

TrainResult train_policy(PolicyNet& policy,
                         const std::function<std::unique_ptr<EnvInterface>(int)>& env_factory,
                         const TrainerOptions& opts) {
  opts.ppo.validate();
  AdamState adam;
  int start_epoch = 0;
  if (!opts.resume_from.empty()) {
    TrainerCheckpoint ck = load_trainer_checkpoint(opts.resume_from);
    policy = std::move(ck.policy);
    adam = std::move(ck.adam);
    start_epoch = ck.next_epoch;
  }

  const int num_envs = opts.ppo.num_parallel_envs;
  std::vector<std::unique_ptr<EnvInterface>> envs;
  envs.reserve(static_cast<std::size_t>(num_envs));
  for (int e = 0; e < num_envs; ++e) envs.push_back(env_factory(e));

  const int epochs = static_cast<int>(
      (opts.total_steps + opts.ppo.steps_per_epoch - 1) / opts.ppo.steps_per_epoch);

  std::ofstream log;
  if (!opts.log_path.empty()) {
    log.open(opts.log_path, start_epoch == 0 ? std::ios::trunc : std::ios::app);
    if (!log) throw std::runtime_error("cannot open training log: " + opts.log_path);
  }

  // Per-env step quota; remainders go to the first streams.
  std::vector<int> quota(static_cast<std::size_t>(num_envs),
                         opts.ppo.steps_per_epoch / num_envs);
  for (int e = 0; e < opts.ppo.steps_per_epoch % num_envs; ++e) ++quota[static_cast<std::size_t>(e)];

  TrainResult result;
  std::string last_checkpoint;
  for (int epoch = start_epoch; epoch < epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Trajectory> trajectories(static_cast<std::size_t>(num_envs));
    auto roll = [&](int e) {
      Rng rng(derive_seed(opts.master_seed,
                          {0x726f6cULL, static_cast<std::uint64_t>(epoch),
                           static_cast<std::uint64_t>(e)}));
      trajectories[static_cast<std::size_t>(e)] =
          collect_trajectory(policy, *envs[static_cast<std::size_t>(e)],
                             quota[static_cast<std::size_t>(e)], rng);
    };
    if (opts.threads > 1) {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(num_envs));
      for (int e = 0; e < num_envs; ++e) pool.emplace_back(roll, e);
      for (auto& th : pool) th.join();
    } else {
      for (int e = 0; e < num_envs; ++e) roll(e);
    }

    Rng update_rng(derive_seed(opts.master_seed, {0x757064ULL, static_cast<std::uint64_t>(epoch)}));
    const UpdateStats stats = ppo_update(policy, adam, trajectories, opts.ppo, update_rng);

    double mean_return = 0.0;
    double mean_delta = 0.0;
    int episodes = 0;
    for (const auto& traj : trajectories) {
      for (double r : traj.episode_returns) mean_return += r;
      for (double d : traj.episode_deltas) mean_delta += d;
      episodes += static_cast<int>(traj.episode_returns.size());
    }
    if (episodes > 0) {
      mean_return /= episodes;
      mean_delta /= episodes;
    }

    result.total_steps += opts.ppo.steps_per_epoch;
    result.epochs_run = epoch + 1;

    if (log.is_open()) {
      nlohmann::json line{
          {"epoch", epoch},
          {"episodes", episodes},
          {"mean_episodic_return", mean_return},
          {"mean_final_delta", mean_delta},
          {"policy_loss", stats.policy_loss},
          {"value_loss", stats.value_loss},
          {"entropy", stats.entropy},
          {"approx_kl", stats.approx_kl},
          {"clip_fraction", stats.clip_fraction},
          {"wall_clock_s",
           std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
      log << line.dump() << "\n";
      log.flush();
    }

    if (!opts.checkpoint_dir.empty()) {
      const bool periodic = opts.checkpoint_every > 0 && (epoch + 1) % opts.checkpoint_every == 0;
      if (periodic || epoch + 1 == epochs) {
        const std::string path =
            opts.checkpoint_dir + "/ckpt_epoch" + std::to_string(epoch + 1) + ".json";
        save_trainer_checkpoint(policy, adam, epoch + 1, opts.master_seed, path);
        last_checkpoint = path;
      }
    }
  }
  result.final_checkpoint = last_checkpoint;
  return result;
}

}  // namespace gsmodac
