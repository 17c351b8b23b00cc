#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gsmodac/cvrp.hpp"
#include "gsmodac/fjsp.hpp"
#include "gsmodac/rng.hpp"

namespace gsmodac {

// Dual-vector FJSP encoding: machine_selection[flat_op] indexes the
// operation's eligible-machine list (job-major flattening), and
// operation_sequence is a permutation of the job multiset where the k-th
// occurrence of job i denotes operation (i, k).
struct FjspGenome {
  std::vector<int> machine_selection;
  std::vector<int> operation_sequence;
  bool operator==(const FjspGenome&) const = default;
};

struct CvrpGenome {
  std::vector<int> tour;  // permutation of customer indices
  bool operator==(const CvrpGenome&) const = default;
};

// PSO particle over sort-key space [0,1]^n.
struct Particle {
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> pbest_position;
  ObjectiveVector pbest_objs;
  bool operator==(const Particle&) const = default;
};

// Tuned NSGA-II parameters for one generation.
struct GaParams {
  double crossover_rate = 0.7;
  double mutation_rate = 0.02;
};

// Tuned MOPSO parameters for one generation.
struct MopsoParams {
  double phi1 = 2.0;
  double phi2 = 2.0;
  double inertia = 0.9;
};

inline constexpr double kMopsoVelocityMin = -0.2;
inline constexpr double kMopsoVelocityMax = 0.2;

std::uint64_t genome_hash(const FjspGenome& g);
std::uint64_t genome_hash(const CvrpGenome& g);
std::uint64_t genome_hash(const Particle& g);

bool genome_valid(const FjspInstance& inst, const FjspGenome& g);
bool genome_valid(const CvrpInstance& inst, const CvrpGenome& g);

// Initial population: 60% Global (greedy machine loads over a random job
// order), 30% Local (per-job greedy), remainder Random; operation sequences
// uniformly random. Fractional counts floor Global/Local, remainder Random.
std::vector<FjspGenome> init_population_fjsp(const FjspInstance& inst, int size, Rng& rng);

std::vector<CvrpGenome> init_population_cvrp(const CvrpInstance& inst, int size, Rng& rng);

// POX kernel: jobs flagged in keep_jobs hold their positions from
// `primary`; remaining slots fill with `other`'s entries in relative order.
std::vector<int> pox_sequence_child(const std::vector<int>& primary,
                                    const std::vector<int>& other,
                                    const std::vector<char>& keep_jobs);

// Machine selection crossed by two-point or uniform (fair coin); operation
// sequence crossed by POX over a random job subset.
std::pair<FjspGenome, FjspGenome> crossover_fjsp(const FjspGenome& a, const FjspGenome& b,
                                                 Rng& rng);

// OX kernel: keeps keep_from[lo..hi] in place, fills the rest from
// fill_from in wrap-around order skipping duplicates.
std::vector<int> ox_tour_child(const std::vector<int>& keep_from,
                               const std::vector<int>& fill_from, std::size_t lo,
                               std::size_t hi);

// Ordered crossover: a contiguous segment is kept, the remainder is filled
// in the other parent's order skipping duplicates.
std::pair<CvrpGenome, CvrpGenome> crossover_cvrp(const CvrpGenome& a, const CvrpGenome& b,
                                                 Rng& rng);

// With probability `rate`, reassign one random operation to a random
// eligible machine and swap two sequence positions.
void mutate_fjsp(const FjspInstance& inst, FjspGenome& g, double rate, Rng& rng);

// Shuffle mutation: per-position swap with probability `rate`.
void mutate_cvrp(CvrpGenome& g, double rate, Rng& rng);

// Customers ordered by ascending key (ties by index), then split by
// capacity.
std::vector<Route> decode_cvrp_keys(const std::vector<double>& position,
                                    const CvrpInstance& inst);

ObjectiveVector evaluate_genome(const FjspInstance& inst, const FjspGenome& g, ObjectiveSet set);
ObjectiveVector evaluate_genome(const CvrpInstance& inst, const CvrpGenome& g);

}  // namespace gsmodac
