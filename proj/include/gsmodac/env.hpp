#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "gsmodac/graphstate.hpp"
#include "gsmodac/neural.hpp"
#include "gsmodac/search.hpp"

namespace gsmodac {

// Squared-improvement reward: Delta = 100 * (hv - hv_initial) /
// (hv_ideal - hv_initial), r = Delta_current^2 - Delta_best^2 when the
// hypervolume improves, 0 otherwise. A near-degenerate denominator turns
// the signal off entirely.
double reward_from_hv(double hv_current, double hv_best, double hv_initial, double hv_ideal);

// Affine map from squashed actions in [-1,1]^k (clamped first) onto the
// parameter ranges.
std::vector<double> map_action(std::span<const double> action,
                               std::span<const ParamRange> ranges);

struct StepResult {
  StateGraph state;
  double reward = 0.0;
  bool done = false;
};

// Rollout surface shared by the real episode environment and test stubs.
class EnvInterface {
 public:
  virtual ~EnvInterface() = default;
  virtual int action_dim() const = 0;
  virtual StateGraph reset_next(Rng& rng) = 0;
  virtual StepResult step(std::span<const double> action, Rng& rng) = 0;
  // Best normalized improvement of the running episode, for logging.
  virtual double delta_best() const { return 0.0; }
};

struct EnvConfig {
  TargetAlgorithm algorithm = TargetAlgorithm::Nsga2Fjsp;
  ObjectiveSet objective_set = ObjectiveSet::Bi;
  int population_size = 50;
  int budget = 50;  // generations per episode
};

// Per-episode wall-clock totals, one slot per pipeline component.
struct EpisodeProfile {
  double total_s = 0.0;
  double state_graph_s = 0.0;
  double policy_inference_s = 0.0;
  double ea_generation_s = 0.0;
  double hypervolume_s = 0.0;
  int generations = 0;
};

// One episode = one EA run over `budget` generations on one instance.
// Hypervolume bookkeeping lives in the fixed frame spanned by the
// bootstrapped ideal point and the episode nadir, which keeps rewards
// invariant under positive rescaling of the raw objectives.
class EpisodeEnv final : public EnvInterface {
 public:
  EpisodeEnv(EnvConfig cfg, std::vector<const Instance*> pool);

  int action_dim() const override;
  StateGraph reset_next(Rng& rng) override;
  StepResult step(std::span<const double> action, Rng& rng) override;
  double delta_best() const override;

  bool done() const { return done_; }
  const EvolutionRun& run() const { return *run_; }
  double hv_ideal() const { return hv_ideal_; }
  const NormalizationContext& context() const { return ctx_; }
  const EnvConfig& config() const { return cfg_; }
  void set_profile(EpisodeProfile* profile) { profile_ = profile; }

 private:
  StateGraph current_graph();

  EnvConfig cfg_;
  std::vector<const Instance*> pool_;
  std::unique_ptr<EvolutionRun> run_;
  NormalizationContext ctx_;
  double hv_ideal_ = 1.0;
  bool done_ = true;
  EpisodeProfile* profile_ = nullptr;
};

// Extended-budget vanilla run that derives the evaluation reference point
// (worst of a canonical seed-0 generation 0) and the ideal point (best
// observed over a doubled-budget run seeded with `seed`).
InstanceMeta bootstrap_instance_meta(const Instance& inst, TargetAlgorithm algo,
                                     ObjectiveSet set, std::uint64_t seed,
                                     int population_size = 50, int budget = 50);

struct EpisodeResult {
  std::vector<ObjectiveVector> final_front;   // non-dominated archive objectives
  std::vector<double> hv_best_trace;          // frame-measured, one entry per generation
  double total_reward = 0.0;
  double delta_best = 0.0;
};

// Runs one full episode on a fixed instance: with a policy (deterministic
// mean actions unless sample_actions) or with fixed static parameters.
EpisodeResult run_episode(const Instance& inst, const EnvConfig& cfg,
                          const PolicyNet* policy, std::span<const double> static_params,
                          std::uint64_t seed, bool sample_actions = false,
                          EpisodeProfile* profile = nullptr);

}  // namespace gsmodac
