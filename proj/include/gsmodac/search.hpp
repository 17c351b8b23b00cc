#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "gsmodac/genomes.hpp"
#include "gsmodac/indicators.hpp"
#include "gsmodac/instance_io.hpp"
#include "gsmodac/pareto.hpp"

namespace gsmodac {

// Fixed affine frame for hypervolume bookkeeping: `ideal` maps to the
// origin and `nadir` to the all-ones reference point. Reward deltas are
// ratios of frame hypervolumes, so the frame factor cancels and the
// bookkeeping is invariant under positive rescaling of raw objectives.
struct HvFrame {
  ObjectiveVector ideal;
  ObjectiveVector nadir;

  ObjectiveVector normalize(const ObjectiveVector& v) const;
  double measure(std::span<const ObjectiveVector> points) const;
};

template <typename G>
struct Individual {
  G genome;
  ObjectiveVector objs;
};

template <typename G>
struct SearchState {
  std::vector<Individual<G>> population;
  std::vector<Individual<G>> best_archive;  // non-dominated over everything evaluated
  std::size_t generation = 0;
  double hv_best = 0.0;     // episode max of hv_last, frame-measured
  double hv_initial = 0.0;  // frame hypervolume of generation 0
  double hv_last = 0.0;     // frame hypervolume of the current population
  ObjectiveVector nadir;    // worst of generation 0, fixed afterwards
};

template <typename G>
std::vector<ObjectiveVector> objectives_of(const std::vector<Individual<G>>& pop) {
  std::vector<ObjectiveVector> out;
  out.reserve(pop.size());
  for (const auto& ind : pop) out.push_back(ind.objs);
  return out;
}

template <typename G>
void archive_insert(std::vector<Individual<G>>& archive, const Individual<G>& cand) {
  for (const auto& a : archive) {
    if (a.objs == cand.objs || dominates(a.objs, cand.objs)) return;
  }
  std::erase_if(archive, [&](const Individual<G>& a) { return dominates(cand.objs, a.objs); });
  archive.push_back(cand);
}

template <typename G>
struct OperatorSuite {
  std::function<ObjectiveVector(const G&)> evaluate;
  std::function<std::pair<G, G>(const G&, const G&, Rng&)> crossover;
  std::function<void(G&, double, Rng&)> mutate;
};

// Seeds generation 0: evaluates the population, fixes the nadir and fills
// the archive. Hypervolume fields are set by apply_hv_frame afterwards.
template <typename G>
void init_search_state(SearchState<G>& state, std::vector<G> genomes,
                       const OperatorSuite<G>& ops) {
  state.population.clear();
  for (auto& g : genomes) {
    Individual<G> ind{std::move(g), {}};
    ind.objs = ops.evaluate(ind.genome);
    state.population.push_back(std::move(ind));
  }
  state.generation = 0;
  state.nadir = state.population.front().objs;
  for (const auto& ind : state.population) {
    for (std::size_t i = 0; i < ind.objs.size(); ++i) {
      state.nadir[i] = std::max(state.nadir[i], ind.objs[i]);
    }
  }
  state.best_archive.clear();
  for (const auto& ind : state.population) archive_insert(state.best_archive, ind);
}

template <typename G>
void apply_hv_frame(SearchState<G>& state, const HvFrame& frame) {
  state.hv_initial = frame.measure(objectives_of(state.population));
  state.hv_last = state.hv_initial;
  state.hv_best = state.hv_initial;
}

// One elitist NSGA-II generation: binary-tournament parents on
// (rank, crowding), rate-gated crossover and mutation, then (mu+lambda)
// truncation with exact-duplicate offspring discarded before survival.
// Population and archive are updated; hypervolume bookkeeping is the
// caller's step.
template <typename G>
void nsga2_generation(SearchState<G>& state, const GaParams& params,
                      const OperatorSuite<G>& ops, Rng& rng) {
  const std::size_t mu = state.population.size();
  const auto parent_objs = objectives_of(state.population);
  const FrontPartition part = non_dominated_sort(parent_objs);

  std::vector<double> crowd(mu, 0.0);
  for (const auto& front : part.fronts) {
    std::vector<ObjectiveVector> front_objs;
    front_objs.reserve(front.size());
    for (std::size_t i : front) front_objs.push_back(parent_objs[i]);
    const auto d = crowding_distance(front_objs);
    for (std::size_t k = 0; k < front.size(); ++k) crowd[front[k]] = d[k];
  }

  auto tournament = [&]() -> std::size_t {
    const std::size_t i = rng.below(mu);
    const std::size_t j = rng.below(mu);
    if (part.rank[i] != part.rank[j]) return part.rank[i] < part.rank[j] ? i : j;
    if (crowd[i] != crowd[j]) return crowd[i] > crowd[j] ? i : j;
    return i;
  };

  std::vector<Individual<G>> offspring;
  offspring.reserve(mu);
  while (offspring.size() < mu) {
    const G& p1 = state.population[tournament()].genome;
    const G& p2 = state.population[tournament()].genome;
    G c1;
    G c2;
    if (rng.bernoulli(params.crossover_rate)) {
      std::tie(c1, c2) = ops.crossover(p1, p2, rng);
    } else {
      c1 = p1;
      c2 = p2;
    }
    ops.mutate(c1, params.mutation_rate, rng);
    ops.mutate(c2, params.mutation_rate, rng);
    offspring.push_back({std::move(c1), {}});
    if (offspring.size() < mu) offspring.push_back({std::move(c2), {}});
  }

  // Merge, dropping offspring whose genome already exists in the pool.
  std::vector<Individual<G>> pool = std::move(state.population);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(2 * mu);
  for (const auto& ind : pool) seen.insert(genome_hash(ind.genome));
  auto duplicate_of_pool = [&](const G& g) {
    if (!seen.count(genome_hash(g))) return false;
    for (const auto& ind : pool) {
      if (ind.genome == g) return true;
    }
    return false;
  };
  for (auto& child : offspring) {
    if (duplicate_of_pool(child.genome)) continue;
    child.objs = ops.evaluate(child.genome);
    archive_insert(state.best_archive, child);
    seen.insert(genome_hash(child.genome));
    pool.push_back(std::move(child));
  }

  const auto pool_objs = objectives_of(pool);
  const FrontPartition pool_part = non_dominated_sort(pool_objs);
  std::vector<Individual<G>> survivors;
  survivors.reserve(mu);
  for (const auto& front : pool_part.fronts) {
    if (survivors.size() + front.size() <= mu) {
      for (std::size_t i : front) survivors.push_back(std::move(pool[i]));
      if (survivors.size() == mu) break;
      continue;
    }
    std::vector<ObjectiveVector> front_objs;
    front_objs.reserve(front.size());
    for (std::size_t i : front) front_objs.push_back(pool_objs[i]);
    const auto d = crowding_distance(front_objs);
    std::vector<std::size_t> order(front.size());
    for (std::size_t k = 0; k < front.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (d[a] != d[b]) return d[a] > d[b];
      return front[a] < front[b];
    });
    for (std::size_t k = 0; survivors.size() < mu; ++k) {
      survivors.push_back(std::move(pool[front[order[k]]]));
    }
    break;
  }
  state.population = std::move(survivors);
  ++state.generation;
}

// One MOPSO generation: inertia/cognitive/social velocity update with
// per-dimension random coefficients, clamped velocity and position, then
// dominance-based personal-best and archive updates.
void mopso_generation(SearchState<Particle>& state, const MopsoParams& params,
                      const CvrpInstance& inst, Rng& rng);

enum class TargetAlgorithm { Nsga2Fjsp, Nsga2Cvrp, MopsoCvrp };

TargetAlgorithm target_algorithm_for(const Instance& inst, const std::string& algorithm);
std::string to_string(TargetAlgorithm a);
int action_dim(TargetAlgorithm a);

// Rule-of-thumb static settings: 0.7/0.02 for NSGA-II, 2.0/2.0/0.9 for MOPSO.
std::vector<double> vanilla_params(TargetAlgorithm a);

struct ParamRange {
  double low = 0.0;
  double high = 1.0;
};

// One EA run on one instance, stepped a generation at a time with freshly
// injected parameters. Used by the RL environment and the CLI harness.
class EvolutionRun {
 public:
  virtual ~EvolutionRun() = default;

  // Evaluates generation 0 and applies a default frame (origin ideal,
  // generation-0 nadir); set_frame re-bases the hypervolume bookkeeping.
  virtual void init(int population_size, Rng& rng) = 0;
  virtual void set_frame(const HvFrame& frame) = 0;
  virtual const HvFrame& frame() const = 0;
  virtual void step(std::span<const double> params, Rng& rng) = 0;

  virtual std::vector<ObjectiveVector> population_objectives() const = 0;
  virtual std::vector<ObjectiveVector> archive_objectives() const = 0;
  virtual std::size_t generation() const = 0;
  virtual double hv_best() const = 0;
  virtual double hv_initial() const = 0;
  virtual double hv_last() const = 0;
  virtual const ObjectiveVector& nadir() const = 0;
  virtual double hv_seconds() const = 0;  // time spent measuring hypervolumes

  virtual TargetAlgorithm algorithm() const = 0;
  virtual std::vector<ParamRange> param_ranges() const = 0;
  virtual std::vector<double> vanilla_params() const = 0;
};

std::unique_ptr<EvolutionRun> make_run(const Instance& inst, TargetAlgorithm algo,
                                       ObjectiveSet set);

}  // namespace gsmodac
