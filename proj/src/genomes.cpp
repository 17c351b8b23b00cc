#include "gsmodac/genomes.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gsmodac {
namespace {

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
  h ^= v;
  return h * 0x100000001b3ULL;
}

std::uint64_t hash_ints(std::uint64_t h, const std::vector<int>& v) {
  for (int x : v) h = fnv1a(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(x)));
  return h;
}

std::uint64_t hash_doubles(std::uint64_t h, const std::vector<double>& v) {
  for (double x : v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(x));
    std::memcpy(&bits, &x, sizeof(bits));
    h = fnv1a(h, bits);
  }
  return h;
}

// Random permutation of the job multiset (job i appears ops_of_job(i) times).
std::vector<int> random_operation_sequence(const FjspInstance& inst, Rng& rng) {
  std::vector<int> seq;
  seq.reserve(static_cast<std::size_t>(inst.total_ops()));
  for (int j = 0; j < inst.num_jobs; ++j) {
    for (int o = 0; o < inst.ops_of_job(j); ++o) seq.push_back(j);
  }
  rng.shuffle(seq);
  return seq;
}

std::size_t flat_index(const FjspInstance& inst, int job, int op) {
  std::size_t idx = 0;
  for (int j = 0; j < job; ++j) idx += static_cast<std::size_t>(inst.ops_of_job(j));
  return idx + static_cast<std::size_t>(op);
}

std::vector<int> global_machine_selection(const FjspInstance& inst, Rng& rng) {
  std::vector<int> sel(static_cast<std::size_t>(inst.total_ops()), 0);
  std::vector<long long> load(static_cast<std::size_t>(inst.num_machines), 0);
  std::vector<int> job_order(static_cast<std::size_t>(inst.num_jobs));
  std::iota(job_order.begin(), job_order.end(), 0);
  rng.shuffle(job_order);
  for (int j : job_order) {
    for (int o = 0; o < inst.ops_of_job(j); ++o) {
      const auto& alts = inst.options[static_cast<std::size_t>(j)][static_cast<std::size_t>(o)];
      int best = 0;
      long long best_load = std::numeric_limits<long long>::max();
      for (std::size_t k = 0; k < alts.size(); ++k) {
        const long long cand = load[static_cast<std::size_t>(alts[k].machine)] + alts[k].time;
        if (cand < best_load) {
          best_load = cand;
          best = static_cast<int>(k);
        }
      }
      sel[flat_index(inst, j, o)] = best;
      load[static_cast<std::size_t>(alts[static_cast<std::size_t>(best)].machine)] = best_load;
    }
  }
  return sel;
}

std::vector<int> local_machine_selection(const FjspInstance& inst) {
  std::vector<int> sel(static_cast<std::size_t>(inst.total_ops()), 0);
  for (int j = 0; j < inst.num_jobs; ++j) {
    std::vector<long long> load(static_cast<std::size_t>(inst.num_machines), 0);
    for (int o = 0; o < inst.ops_of_job(j); ++o) {
      const auto& alts = inst.options[static_cast<std::size_t>(j)][static_cast<std::size_t>(o)];
      int best = 0;
      long long best_load = std::numeric_limits<long long>::max();
      for (std::size_t k = 0; k < alts.size(); ++k) {
        const long long cand = load[static_cast<std::size_t>(alts[k].machine)] + alts[k].time;
        if (cand < best_load) {
          best_load = cand;
          best = static_cast<int>(k);
        }
      }
      sel[flat_index(inst, j, o)] = best;
      load[static_cast<std::size_t>(alts[static_cast<std::size_t>(best)].machine)] = best_load;
    }
  }
  return sel;
}

std::vector<int> random_machine_selection(const FjspInstance& inst, Rng& rng) {
  std::vector<int> sel;
  sel.reserve(static_cast<std::size_t>(inst.total_ops()));
  for (const auto& job : inst.options) {
    for (const auto& op : job) {
      sel.push_back(static_cast<int>(rng.below(op.size())));
    }
  }
  return sel;
}

}  // namespace

std::uint64_t genome_hash(const FjspGenome& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = hash_ints(h, g.machine_selection);
  h = fnv1a(h, 0x5eedULL);
  return hash_ints(h, g.operation_sequence);
}

std::uint64_t genome_hash(const CvrpGenome& g) {
  return hash_ints(0xcbf29ce484222325ULL, g.tour);
}

std::uint64_t genome_hash(const Particle& g) {
  return hash_doubles(0xcbf29ce484222325ULL, g.position);
}

bool genome_valid(const FjspInstance& inst, const FjspGenome& g) {
  const std::size_t total = static_cast<std::size_t>(inst.total_ops());
  if (g.machine_selection.size() != total || g.operation_sequence.size() != total) return false;
  std::size_t flat = 0;
  for (const auto& job : inst.options) {
    for (const auto& op : job) {
      const int sel = g.machine_selection[flat++];
      if (sel < 0 || sel >= static_cast<int>(op.size())) return false;
    }
  }
  std::vector<int> counts(static_cast<std::size_t>(inst.num_jobs), 0);
  for (int job : g.operation_sequence) {
    if (job < 0 || job >= inst.num_jobs) return false;
    ++counts[static_cast<std::size_t>(job)];
  }
  for (int j = 0; j < inst.num_jobs; ++j) {
    if (counts[static_cast<std::size_t>(j)] != inst.ops_of_job(j)) return false;
  }
  return true;
}

bool genome_valid(const CvrpInstance& inst, const CvrpGenome& g) {
  const int n = inst.num_customers();
  if (static_cast<int>(g.tour.size()) != n) return false;
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (int c : g.tour) {
    if (c < 0 || c >= n || seen[static_cast<std::size_t>(c)]++) return false;
  }
  return true;
}

std::vector<FjspGenome> init_population_fjsp(const FjspInstance& inst, int size, Rng& rng) {
  if (size < 1) throw std::invalid_argument("init_population_fjsp: size must be >= 1");
  const int n_global = static_cast<int>(0.6 * size);
  const int n_local = static_cast<int>(0.3 * size);
  std::vector<FjspGenome> pop;
  pop.reserve(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) {
    FjspGenome g;
    if (i < n_global) {
      g.machine_selection = global_machine_selection(inst, rng);
    } else if (i < n_global + n_local) {
      g.machine_selection = local_machine_selection(inst);
    } else {
      g.machine_selection = random_machine_selection(inst, rng);
    }
    g.operation_sequence = random_operation_sequence(inst, rng);
    pop.push_back(std::move(g));
  }
  return pop;
}

std::vector<CvrpGenome> init_population_cvrp(const CvrpInstance& inst, int size, Rng& rng) {
  if (size < 1) throw std::invalid_argument("init_population_cvrp: size must be >= 1");
  std::vector<CvrpGenome> pop;
  pop.reserve(static_cast<std::size_t>(size));
  std::vector<int> base(static_cast<std::size_t>(inst.num_customers()));
  std::iota(base.begin(), base.end(), 0);
  for (int i = 0; i < size; ++i) {
    CvrpGenome g;
    g.tour = base;
    rng.shuffle(g.tour);
    pop.push_back(std::move(g));
  }
  return pop;
}

std::vector<int> pox_sequence_child(const std::vector<int>& primary,
                                    const std::vector<int>& other,
                                    const std::vector<char>& keep_jobs) {
  const std::size_t n = primary.size();
  std::vector<int> child(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (keep_jobs[static_cast<std::size_t>(primary[i])]) child[i] = primary[i];
  }
  std::size_t fill = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (keep_jobs[static_cast<std::size_t>(other[i])]) continue;
    while (child[fill] != -1) ++fill;
    child[fill] = other[i];
  }
  return child;
}

std::pair<FjspGenome, FjspGenome> crossover_fjsp(const FjspGenome& a, const FjspGenome& b,
                                                 Rng& rng) {
  if (a.machine_selection.size() != b.machine_selection.size() ||
      a.operation_sequence.size() != b.operation_sequence.size()) {
    throw std::invalid_argument("crossover_fjsp: parents from different instances");
  }
  FjspGenome c1 = a;
  FjspGenome c2 = b;

  const std::size_t len = a.machine_selection.size();
  if (rng.bernoulli(0.5)) {
    // two-point
    std::size_t lo = rng.below(len + 1);
    std::size_t hi = rng.below(len + 1);
    if (lo > hi) std::swap(lo, hi);
    for (std::size_t i = lo; i < hi; ++i) {
      std::swap(c1.machine_selection[i], c2.machine_selection[i]);
    }
  } else {
    // uniform
    for (std::size_t i = 0; i < len; ++i) {
      if (rng.bernoulli(0.5)) std::swap(c1.machine_selection[i], c2.machine_selection[i]);
    }
  }

  int num_jobs = 0;
  for (int job : a.operation_sequence) num_jobs = std::max(num_jobs, job + 1);
  std::vector<char> keep(static_cast<std::size_t>(num_jobs), 0);
  for (auto& k : keep) k = rng.bernoulli(0.5) ? 1 : 0;
  c1.operation_sequence = pox_sequence_child(a.operation_sequence, b.operation_sequence, keep);
  c2.operation_sequence = pox_sequence_child(b.operation_sequence, a.operation_sequence, keep);
  return {std::move(c1), std::move(c2)};
}

std::vector<int> ox_tour_child(const std::vector<int>& keep_from,
                               const std::vector<int>& fill_from, std::size_t lo,
                               std::size_t hi) {
  const std::size_t n = keep_from.size();
  std::vector<int> child(n, -1);
  std::vector<char> used(n, 0);
  for (std::size_t i = lo; i <= hi; ++i) {
    child[i] = keep_from[i];
    used[static_cast<std::size_t>(keep_from[i])] = 1;
  }
  std::size_t write = (hi + 1) % n;
  for (std::size_t k = 0; k < n; ++k) {
    const int cand = fill_from[(hi + 1 + k) % n];
    if (used[static_cast<std::size_t>(cand)]) continue;
    child[write] = cand;
    used[static_cast<std::size_t>(cand)] = 1;
    write = (write + 1) % n;
  }
  return child;
}

std::pair<CvrpGenome, CvrpGenome> crossover_cvrp(const CvrpGenome& a, const CvrpGenome& b,
                                                 Rng& rng) {
  const std::size_t n = a.tour.size();
  if (n != b.tour.size()) {
    throw std::invalid_argument("crossover_cvrp: parents from different instances");
  }
  std::size_t lo = rng.below(n);
  std::size_t hi = rng.below(n);
  if (lo > hi) std::swap(lo, hi);

  CvrpGenome c1;
  CvrpGenome c2;
  c1.tour = ox_tour_child(a.tour, b.tour, lo, hi);
  c2.tour = ox_tour_child(b.tour, a.tour, lo, hi);
  return {std::move(c1), std::move(c2)};
}

void mutate_fjsp(const FjspInstance& inst, FjspGenome& g, double rate, Rng& rng) {
  if (!rng.bernoulli(rate)) return;
  const std::size_t total = g.machine_selection.size();
  // reassign one operation to a random eligible machine
  const std::size_t flat = rng.below(total);
  std::size_t scan = flat;
  for (const auto& job : inst.options) {
    if (scan < job.size()) {
      g.machine_selection[flat] = static_cast<int>(rng.below(job[scan].size()));
      break;
    }
    scan -= job.size();
  }
  // swap two distinct sequence positions
  const std::size_t i = rng.below(total);
  std::size_t j = rng.below(total - 1);
  if (j >= i) ++j;
  std::swap(g.operation_sequence[i], g.operation_sequence[j]);
}

void mutate_cvrp(CvrpGenome& g, double rate, Rng& rng) {
  const std::size_t n = g.tour.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.bernoulli(rate)) {
      std::swap(g.tour[i], g.tour[rng.below(n)]);
    }
  }
}

std::vector<Route> decode_cvrp_keys(const std::vector<double>& position,
                                    const CvrpInstance& inst) {
  const int n = inst.num_customers();
  if (static_cast<int>(position.size()) != n) {
    throw std::invalid_argument("decode_cvrp_keys: position length mismatch");
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ka = position[static_cast<std::size_t>(a)];
    const double kb = position[static_cast<std::size_t>(b)];
    if (ka != kb) return ka < kb;
    return a < b;
  });
  return split_routes_by_capacity(inst, order);
}

ObjectiveVector evaluate_genome(const FjspInstance& inst, const FjspGenome& g, ObjectiveSet set) {
  return evaluate_fjsp(inst, decode_fjsp(inst, g.machine_selection, g.operation_sequence), set);
}

ObjectiveVector evaluate_genome(const CvrpInstance& inst, const CvrpGenome& g) {
  return evaluate_cvrp(inst, split_routes_by_capacity(inst, g.tour));
}

}  // namespace gsmodac
