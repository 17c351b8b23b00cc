#include "gsmodac/search.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace gsmodac {

ObjectiveVector HvFrame::normalize(const ObjectiveVector& v) const {
  ObjectiveVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double denom = nadir[i] - ideal[i];
    // A collapsed axis puts every point on the reference plane (zero volume).
    out[i] = denom > 0.0 ? (v[i] - ideal[i]) / denom : 1.0;
  }
  return out;
}

double HvFrame::measure(std::span<const ObjectiveVector> points) const {
  std::vector<ObjectiveVector> mapped;
  mapped.reserve(points.size());
  for (const auto& p : points) mapped.push_back(normalize(p));
  const ObjectiveVector ones(ideal.size(), 1.0);
  return hypervolume(mapped, ones);
}

void mopso_generation(SearchState<Particle>& state, const MopsoParams& params,
                      const CvrpInstance& inst, Rng& rng) {
  if (state.best_archive.empty()) {
    throw std::logic_error("mopso_generation: empty archive");
  }
  const std::size_t dims = state.population.front().genome.position.size();

  // Move every particle against the archive as of generation start.
  const std::vector<Individual<Particle>> archive_snapshot = state.best_archive;
  for (auto& ind : state.population) {
    Particle& p = ind.genome;
    const std::vector<double>& gbest =
        archive_snapshot[rng.below(archive_snapshot.size())].genome.position;
    for (std::size_t d = 0; d < dims; ++d) {
      const double u1 = rng.uniform();
      const double u2 = rng.uniform();
      double v = params.inertia * p.velocity[d] +
                 u1 * params.phi1 * (p.pbest_position[d] - p.position[d]) +
                 u2 * params.phi2 * (gbest[d] - p.position[d]);
      v = std::clamp(v, kMopsoVelocityMin, kMopsoVelocityMax);
      p.velocity[d] = v;
      p.position[d] = std::clamp(p.position[d] + v, 0.0, 1.0);
    }
    ind.objs = evaluate_cvrp(inst, decode_cvrp_keys(p.position, inst));
  }

  for (auto& ind : state.population) {
    Particle& p = ind.genome;
    if (dominates(ind.objs, p.pbest_objs)) {
      p.pbest_position = p.position;
      p.pbest_objs = ind.objs;
    } else if (!dominates(p.pbest_objs, ind.objs) && ind.objs != p.pbest_objs) {
      if (rng.bernoulli(0.5)) {
        p.pbest_position = p.position;
        p.pbest_objs = ind.objs;
      }
    }
    archive_insert(state.best_archive, ind);
  }
  ++state.generation;
}

TargetAlgorithm target_algorithm_for(const Instance& inst, const std::string& algorithm) {
  if (inst.is_fjsp()) {
    if (algorithm == "nsga2" || algorithm.empty()) return TargetAlgorithm::Nsga2Fjsp;
    throw std::invalid_argument("fjsp only supports the nsga2 algorithm");
  }
  if (algorithm == "nsga2" || algorithm.empty()) return TargetAlgorithm::Nsga2Cvrp;
  if (algorithm == "mopso") return TargetAlgorithm::MopsoCvrp;
  throw std::invalid_argument("unknown algorithm: " + algorithm);
}

std::string to_string(TargetAlgorithm a) {
  switch (a) {
    case TargetAlgorithm::Nsga2Fjsp: return "nsga2-fjsp";
    case TargetAlgorithm::Nsga2Cvrp: return "nsga2-cvrp";
    case TargetAlgorithm::MopsoCvrp: return "mopso-cvrp";
  }
  return "?";
}

int action_dim(TargetAlgorithm a) {
  return a == TargetAlgorithm::MopsoCvrp ? 3 : 2;
}

std::vector<double> vanilla_params(TargetAlgorithm a) {
  return a == TargetAlgorithm::MopsoCvrp ? std::vector<double>{2.0, 2.0, 0.9}
                                         : std::vector<double>{0.7, 0.02};
}

namespace {

constexpr ParamRange kCrossoverRange{0.6, 1.0};
constexpr ParamRange kMutationRange{0.0, 0.1};
constexpr ParamRange kPhiRange{1.0, 3.0};
constexpr ParamRange kInertiaRange{0.6, 0.9};

// Shared bookkeeping for the concrete runs: frame management, hypervolume
// accounting and timing.
template <typename G>
class RunBase : public EvolutionRun {
 public:
  void set_frame(const HvFrame& frame) override {
    frame_ = frame;
    if (state_.generation != 0) {
      throw std::logic_error("set_frame: frame must be fixed at generation 0");
    }
    apply_hv_frame(state_, frame_);
  }
  const HvFrame& frame() const override { return frame_; }

  std::vector<ObjectiveVector> population_objectives() const override {
    return objectives_of(state_.population);
  }
  std::vector<ObjectiveVector> archive_objectives() const override {
    return objectives_of(state_.best_archive);
  }
  std::size_t generation() const override { return state_.generation; }
  double hv_best() const override { return state_.hv_best; }
  double hv_initial() const override { return state_.hv_initial; }
  double hv_last() const override { return state_.hv_last; }
  const ObjectiveVector& nadir() const override { return state_.nadir; }
  double hv_seconds() const override { return hv_seconds_; }

  SearchState<G>& state() { return state_; }
  const SearchState<G>& state() const { return state_; }

 protected:
  void apply_default_frame() {
    frame_.ideal.assign(state_.nadir.size(), 0.0);
    frame_.nadir = state_.nadir;
    apply_hv_frame(state_, frame_);
  }

  void refresh_hv() {
    const auto t0 = std::chrono::steady_clock::now();
    state_.hv_last = frame_.measure(objectives_of(state_.population));
    state_.hv_best = std::max(state_.hv_best, state_.hv_last);
    hv_seconds_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  SearchState<G> state_;
  HvFrame frame_;
  double hv_seconds_ = 0.0;
};

class FjspNsga2Run final : public RunBase<FjspGenome> {
 public:
  FjspNsga2Run(const FjspInstance& inst, ObjectiveSet set) : inst_(inst), set_(set) {
    ops_.evaluate = [this](const FjspGenome& g) { return evaluate_genome(inst_, g, set_); };
    ops_.crossover = [](const FjspGenome& a, const FjspGenome& b, Rng& rng) {
      return crossover_fjsp(a, b, rng);
    };
    ops_.mutate = [this](FjspGenome& g, double rate, Rng& rng) {
      mutate_fjsp(inst_, g, rate, rng);
    };
  }

  void init(int population_size, Rng& rng) override {
    init_search_state(state_, init_population_fjsp(inst_, population_size, rng), ops_);
    apply_default_frame();
  }

  void step(std::span<const double> params, Rng& rng) override {
    nsga2_generation(state_, GaParams{params[0], params[1]}, ops_, rng);
    refresh_hv();
  }

  TargetAlgorithm algorithm() const override { return TargetAlgorithm::Nsga2Fjsp; }
  std::vector<ParamRange> param_ranges() const override {
    return {kCrossoverRange, kMutationRange};
  }
  std::vector<double> vanilla_params() const override { return {0.7, 0.02}; }

 private:
  FjspInstance inst_;
  ObjectiveSet set_;
  OperatorSuite<FjspGenome> ops_;
};

class CvrpNsga2Run final : public RunBase<CvrpGenome> {
 public:
  explicit CvrpNsga2Run(const CvrpInstance& inst) : inst_(inst) {
    ops_.evaluate = [this](const CvrpGenome& g) { return evaluate_genome(inst_, g); };
    ops_.crossover = [](const CvrpGenome& a, const CvrpGenome& b, Rng& rng) {
      return crossover_cvrp(a, b, rng);
    };
    ops_.mutate = [](CvrpGenome& g, double rate, Rng& rng) { mutate_cvrp(g, rate, rng); };
  }

  void init(int population_size, Rng& rng) override {
    init_search_state(state_, init_population_cvrp(inst_, population_size, rng), ops_);
    apply_default_frame();
  }

  void step(std::span<const double> params, Rng& rng) override {
    nsga2_generation(state_, GaParams{params[0], params[1]}, ops_, rng);
    refresh_hv();
  }

  TargetAlgorithm algorithm() const override { return TargetAlgorithm::Nsga2Cvrp; }
  std::vector<ParamRange> param_ranges() const override {
    return {kCrossoverRange, kMutationRange};
  }
  std::vector<double> vanilla_params() const override { return {0.7, 0.02}; }

 private:
  CvrpInstance inst_;
  OperatorSuite<CvrpGenome> ops_;
};

class CvrpMopsoRun final : public RunBase<Particle> {
 public:
  explicit CvrpMopsoRun(const CvrpInstance& inst) : inst_(inst) {}

  void init(int population_size, Rng& rng) override {
    const std::size_t dims = static_cast<std::size_t>(inst_.num_customers());
    std::vector<Particle> particles;
    particles.reserve(static_cast<std::size_t>(population_size));
    for (int i = 0; i < population_size; ++i) {
      Particle p;
      p.position.resize(dims);
      for (auto& x : p.position) x = rng.uniform();
      p.velocity.assign(dims, 0.0);
      p.pbest_position = p.position;
      particles.push_back(std::move(p));
    }
    OperatorSuite<Particle> ops;
    ops.evaluate = [this](const Particle& p) {
      return evaluate_cvrp(inst_, decode_cvrp_keys(p.position, inst_));
    };
    init_search_state(state_, std::move(particles), ops);
    for (auto& ind : state_.population) ind.genome.pbest_objs = ind.objs;
    apply_default_frame();
  }

  void step(std::span<const double> params, Rng& rng) override {
    mopso_generation(state_, MopsoParams{params[0], params[1], params[2]}, inst_, rng);
    refresh_hv();
  }

  TargetAlgorithm algorithm() const override { return TargetAlgorithm::MopsoCvrp; }
  std::vector<ParamRange> param_ranges() const override {
    return {kPhiRange, kPhiRange, kInertiaRange};
  }
  std::vector<double> vanilla_params() const override { return {2.0, 2.0, 0.9}; }

 private:
  CvrpInstance inst_;
};

}  // namespace

std::unique_ptr<EvolutionRun> make_run(const Instance& inst, TargetAlgorithm algo,
                                       ObjectiveSet set) {
  switch (algo) {
    case TargetAlgorithm::Nsga2Fjsp:
      return std::make_unique<FjspNsga2Run>(inst.fjsp(), set);
    case TargetAlgorithm::Nsga2Cvrp:
      if (set != ObjectiveSet::Bi) {
        throw std::invalid_argument("cvrp supports only the bi objective set");
      }
      return std::make_unique<CvrpNsga2Run>(inst.cvrp());
    case TargetAlgorithm::MopsoCvrp:
      if (set != ObjectiveSet::Bi) {
        throw std::invalid_argument("cvrp supports only the bi objective set");
      }
      return std::make_unique<CvrpMopsoRun>(inst.cvrp());
  }
  throw std::logic_error("make_run: unhandled algorithm");
}

}  // namespace gsmodac
