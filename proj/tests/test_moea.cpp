#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <numeric>
#include <set>

#include "gsmodac/search.hpp"
#include "test_oracles.hpp"

using namespace gsmodac;

namespace {

Instance make_fjsp_instance(std::uint64_t seed, int jobs = 5, int machines = 5) {
  Instance inst;
  inst.kind = "fjsp";
  inst.seed = seed;
  inst.data = generate_fjsp(seed, jobs, machines);
  return inst;
}

Instance make_cvrp_instance(std::uint64_t seed, int customers = 15) {
  Instance inst;
  inst.kind = "cvrp";
  inst.seed = seed;
  inst.data = generate_cvrp(seed, customers);
  return inst;
}

std::multiset<ObjectiveVector> objective_multiset(const std::vector<ObjectiveVector>& objs) {
  return {objs.begin(), objs.end()};
}

}  // namespace

TEST_CASE("init_population_fjsp follows the 60/30/10 mix") {
  const auto inst = generate_fjsp(1, 5, 5);
  Rng rng(2);
  const auto pop = init_population_fjsp(inst, 10, rng);
  REQUIRE(pop.size() == 10);
  for (const auto& g : pop) CHECK(genome_valid(inst, g));

  // Local individuals (indices 6..8) share one deterministic machine vector.
  CHECK(pop[6].machine_selection == pop[7].machine_selection);
  CHECK(pop[7].machine_selection == pop[8].machine_selection);

  // size=1 floors both heuristic shares to zero
  Rng rng2(3);
  const auto tiny = init_population_fjsp(inst, 1, rng2);
  CHECK(tiny.size() == 1);
}

TEST_CASE("single-machine instance: all init methods pick the only machine") {
  const auto inst = generate_fjsp(4, 4, 1);
  Rng rng(5);
  const auto pop = init_population_fjsp(inst, 10, rng);
  for (const auto& g : pop) {
    for (int sel : g.machine_selection) CHECK(sel == 0);
  }
}

TEST_CASE("global init greedily tracks accumulated machine load") {
  // two jobs, one op each, both eligible on both machines; costs chosen so
  // the greedy assignment is the same for either job order
  FjspInstance inst;
  inst.num_jobs = 2;
  inst.num_machines = 2;
  inst.options = {{{{0, 2}, {1, 10}}}, {{{0, 30}, {1, 4}}}};
  Rng rng(1);
  const auto pop = init_population_fjsp(inst, 10, rng);
  for (int i = 0; i < 6; ++i) {
    const auto& sel = pop[static_cast<std::size_t>(i)].machine_selection;
    CHECK(sel[0] == 0);  // job 0 on machine 0 (2 beats 10, even loaded with 4)
    CHECK(sel[1] == 1);  // job 1 on machine 1 (4 beats 30)
  }
}

TEST_CASE("POX keeps subset positions and fills the rest in other-parent order") {
  const std::vector<int> a = {0, 1, 2, 0, 1, 2};
  const std::vector<int> b = {2, 1, 0, 2, 1, 0};

  // subset = all jobs: child equals the primary parent
  CHECK(pox_sequence_child(a, b, {1, 1, 1}) == a);
  // empty subset: everything refills in the other parent's relative order
  CHECK(pox_sequence_child(a, b, {0, 0, 0}) == b);
  // keep job 1's positions from a, fill {0,2} in b's order
  CHECK(pox_sequence_child(a, b, {0, 1, 0}) == std::vector<int>{2, 1, 0, 2, 1, 0});
  CHECK(pox_sequence_child(a, b, {1, 0, 0}) == std::vector<int>{0, 2, 1, 0, 2, 1});

  // crossover_fjsp draws the job subset internally; exercise validity and
  // the multiset invariant over many draws as well.
  FjspGenome ga{{0, 0, 0, 0, 0, 0}, a};
  FjspGenome gb{{0, 0, 0, 0, 0, 0}, b};
  Rng rng(7);
  for (int t = 0; t < 2000; ++t) {
    const auto [c1, c2] = crossover_fjsp(ga, gb, rng);
    const std::multiset<int> want(a.begin(), a.end());
    CHECK(std::multiset<int>(c1.operation_sequence.begin(), c1.operation_sequence.end()) == want);
    CHECK(std::multiset<int>(c2.operation_sequence.begin(), c2.operation_sequence.end()) == want);
  }
}

TEST_CASE("fjsp crossover children stay valid on random instances") {
  const auto inst = generate_fjsp(10, 6, 4);
  Rng rng(11);
  auto pop = init_population_fjsp(inst, 20, rng);
  for (int t = 0; t < 10000; ++t) {
    const auto& a = pop[rng.below(pop.size())];
    const auto& b = pop[rng.below(pop.size())];
    const auto [c1, c2] = crossover_fjsp(a, b, rng);
    REQUIRE(genome_valid(inst, c1));
    REQUIRE(genome_valid(inst, c2));
  }
}

TEST_CASE("ordered crossover endpoints and identity") {
  CvrpGenome a{{0, 1, 2, 3, 4}};
  CvrpGenome b{{4, 3, 2, 1, 0}};

  // segment = whole tour: child equals the keeping parent
  CHECK(ox_tour_child(a.tour, b.tour, 0, 4) == a.tour);
  CHECK(ox_tour_child(b.tour, a.tour, 0, 4) == b.tour);
  // keep a[1..2]; b's order from index 3 skipping {1,2} gives 0,4,3 written
  // at positions 3,4,0
  CHECK(ox_tour_child(a.tour, b.tour, 1, 2) == std::vector<int>{3, 1, 2, 0, 4});

  const auto inst5 = generate_cvrp(1, 5);
  Rng rng(13);
  for (int t = 0; t < 2000; ++t) {
    const auto [c1, c2] = crossover_cvrp(a, b, rng);
    CHECK(genome_valid(inst5, c1));
    CHECK(genome_valid(inst5, c2));
  }
  // identical parents reproduce themselves regardless of the cut
  for (int t = 0; t < 100; ++t) {
    const auto [c1, c2] = crossover_cvrp(a, a, rng);
    CHECK(c1.tour == a.tour);
    CHECK(c2.tour == a.tour);
  }
}

TEST_CASE("cvrp crossover validity over random pairs") {
  const auto inst = generate_cvrp(20, 30);
  Rng rng(17);
  std::vector<int> base(30);
  std::iota(base.begin(), base.end(), 0);
  CvrpGenome a{base};
  CvrpGenome b{base};
  for (int t = 0; t < 10000; ++t) {
    rng.shuffle(a.tour);
    rng.shuffle(b.tour);
    const auto [c1, c2] = crossover_cvrp(a, b, rng);
    REQUIRE(genome_valid(inst, c1));
    REQUIRE(genome_valid(inst, c2));
  }
}

TEST_CASE("mutation respects rates and invariants") {
  const auto inst = generate_fjsp(30, 5, 5);
  Rng rng(19);
  auto pop = init_population_fjsp(inst, 5, rng);

  SUBCASE("rate 0 is a no-op") {
    auto g = pop[0];
    const auto before = g;
    mutate_fjsp(inst, g, 0.0, rng);
    CHECK(g == before);

    CvrpGenome t{{3, 1, 2, 0}};
    const auto before_t = t;
    mutate_cvrp(t, 0.0, rng);
    CHECK(t == before_t);
  }

  SUBCASE("fjsp mutation never assigns an ineligible machine") {
    for (int t = 0; t < 5000; ++t) {
      auto g = pop[rng.below(pop.size())];
      mutate_fjsp(inst, g, 1.0, rng);
      REQUIRE(genome_valid(inst, g));
    }
  }

  SUBCASE("cvrp shuffle mutation preserves the permutation at rate 1") {
    const auto cinst = generate_cvrp(21, 25);
    std::vector<int> base(25);
    std::iota(base.begin(), base.end(), 0);
    for (int t = 0; t < 2000; ++t) {
      CvrpGenome g{base};
      mutate_cvrp(g, 1.0, rng);
      REQUIRE(genome_valid(cinst, g));
    }
  }
}

TEST_CASE("decode_cvrp_keys ordering, ties and capacity split") {
  CvrpInstance inst;
  inst.depot = {0, 0};
  inst.coords = {{0.1, 0}, {0.2, 0}, {0.3, 0}, {0.4, 0}};
  inst.demands = {10, 10, 10, 15};
  inst.capacity = 30;

  // sorted keys visit customers in index order; capacity forces a split
  const auto routes = decode_cvrp_keys({0.1, 0.2, 0.3, 0.4}, inst);
  REQUIRE(routes.size() == 2);
  CHECK(routes[0] == Route{0, 1, 2});
  CHECK(routes[1] == Route{3});

  // equal keys break ties by customer index
  const auto tied = decode_cvrp_keys({0.5, 0.5, 0.5, 0.5}, inst);
  CHECK(tied[0] == Route{0, 1, 2});

  // total demand within capacity -> single route
  CvrpInstance small = inst;
  small.capacity = 100;
  CHECK(decode_cvrp_keys({0.9, 0.1, 0.5, 0.3}, small).size() == 1);

  // property: routes partition customers and respect capacity
  Rng rng(23);
  const auto rand_inst = generate_cvrp(33, 40);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> keys(40);
    for (auto& k : keys) k = rng.uniform();
    const auto r = decode_cvrp_keys(keys, rand_inst);
    CHECK_NOTHROW(evaluate_cvrp(rand_inst, r));
  }
}

namespace {

struct FjspFixture {
  Instance inst = make_fjsp_instance(100);
  std::unique_ptr<EvolutionRun> run;

  explicit FjspFixture(std::uint64_t seed = 500, int pop = 20) {
    run = make_run(inst, TargetAlgorithm::Nsga2Fjsp, ObjectiveSet::Bi);
    Rng rng(seed);
    run->init(pop, rng);
  }
};

}  // namespace

TEST_CASE("nsga2 generation under zero variation preserves the objective multiset") {
  FjspFixture fx;
  Rng rng(77);
  const auto before = objective_multiset(fx.run->population_objectives());
  for (int g = 0; g < 5; ++g) {
    const double params[2] = {0.0, 0.0};
    fx.run->step(params, rng);
    CHECK(objective_multiset(fx.run->population_objectives()) == before);
  }
}

TEST_CASE("nsga2 hv_best is monotone and matches archive monotonicity") {
  FjspFixture fx;
  Rng rng(78);
  double prev_hv = fx.run->hv_best();
  double prev_archive_hv = -1.0;
  for (int g = 0; g < 15; ++g) {
    const double params[2] = {0.9, 0.05};
    fx.run->step(params, rng);
    CHECK(fx.run->hv_best() >= prev_hv);
    prev_hv = fx.run->hv_best();

    const double archive_hv =
        hypervolume(fx.run->archive_objectives(), fx.run->nadir());
    CHECK(archive_hv >= prev_archive_hv - 1e-12);
    prev_archive_hv = archive_hv;

    // archive stays internally non-dominated
    const auto archive = fx.run->archive_objectives();
    for (const auto& a : archive) {
      for (const auto& b : archive) {
        CHECK_FALSE(dominates(a, b));
      }
    }
  }
}

TEST_CASE("nsga2 elitism: surviving front-0 members not dominated by offspring persist") {
  FjspFixture fx;
  Rng rng(79);
  for (int g = 0; g < 10; ++g) {
    const auto pop_before = fx.run->population_objectives();
    const auto part_before = non_dominated_sort(pop_before);
    const double params[2] = {0.8, 0.03};
    fx.run->step(params, rng);
    const auto pop_after = fx.run->population_objectives();

    // every front-0 objective vector of gen t that stayed non-dominated in
    // the merged pool survives when the merged front 0 fits the population
    const auto part_after = non_dominated_sort(pop_after);
    for (std::size_t i : part_before.fronts[0]) {
      bool dominated_by_new = false;
      for (const auto& q : pop_after) {
        if (dominates(q, pop_before[i])) {
          dominated_by_new = true;
          break;
        }
      }
      if (!dominated_by_new &&
          part_after.fronts[0].size() + part_before.fronts[0].size() <= pop_after.size()) {
        const bool present =
            std::find(pop_after.begin(), pop_after.end(), pop_before[i]) != pop_after.end();
        CHECK(present);
      }
    }
  }
}

TEST_CASE("nsga2 fixed seed replay is deterministic") {
  auto snapshot = [](std::uint64_t seed) {
    FjspFixture fx(seed);
    Rng rng(seed + 1);
    for (int g = 0; g < 5; ++g) {
      const double params[2] = {0.85, 0.02};
      fx.run->step(params, rng);
    }
    return std::make_pair(fx.run->population_objectives(), fx.run->hv_best());
  };
  const auto a = snapshot(900);
  const auto b = snapshot(900);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
}

TEST_CASE("cvrp nsga2 run steps cleanly and keeps genomes valid") {
  Instance inst = make_cvrp_instance(200, 20);
  auto run = make_run(inst, TargetAlgorithm::Nsga2Cvrp, ObjectiveSet::Bi);
  Rng rng(31);
  run->init(16, rng);
  double prev = run->hv_best();
  for (int g = 0; g < 10; ++g) {
    const double params[2] = {0.9, 0.08};
    run->step(params, rng);
    CHECK(run->hv_best() >= prev);
    prev = run->hv_best();
  }
  CHECK(run->generation() == 10);
}

TEST_CASE("mopso null update leaves positions unchanged") {
  Instance inst = make_cvrp_instance(201, 10);
  auto run = make_run(inst, TargetAlgorithm::MopsoCvrp, ObjectiveSet::Bi);
  Rng rng(37);
  run->init(8, rng);
  const auto before = run->population_objectives();
  const double params[3] = {0.0, 0.0, 0.0};  // phi1 = phi2 = inertia = 0
  run->step(params, rng);
  CHECK(run->population_objectives() == before);
}

TEST_CASE("mopso velocity decays by inertia when x = pbest = gbest") {
  SearchState<Particle> state;
  Individual<Particle> ind;
  ind.genome.position = {0.5, 0.5};
  ind.genome.velocity = {0.1, -0.1};
  ind.genome.pbest_position = ind.genome.position;
  CvrpInstance inst;
  inst.depot = {0, 0};
  inst.coords = {{0.2, 0.2}, {0.8, 0.8}};
  inst.demands = {1, 1};
  inst.capacity = 40;
  ind.objs = evaluate_cvrp(inst, decode_cvrp_keys(ind.genome.position, inst));
  ind.genome.pbest_objs = ind.objs;
  state.population = {ind};
  state.best_archive = {ind};  // gbest == x
  state.nadir = ind.objs;

  Rng rng(41);
  mopso_generation(state, MopsoParams{1.5, 2.5, 0.5}, inst, rng);
  const auto& p = state.population[0].genome;
  CHECK(p.velocity[0] == doctest::Approx(0.05));
  CHECK(p.velocity[1] == doctest::Approx(-0.05));
}

TEST_CASE("mopso respects velocity and position clamps") {
  Instance inst = make_cvrp_instance(202, 12);
  auto run = make_run(inst, TargetAlgorithm::MopsoCvrp, ObjectiveSet::Bi);
  Rng rng(43);
  run->init(10, rng);
  for (int g = 0; g < 20; ++g) {
    const double params[3] = {3.0, 3.0, 0.9};  // most aggressive tuned setting
    run->step(params, rng);
  }
  CHECK(run->generation() == 20);
  CHECK(run->hv_best() >= run->hv_initial());
}

TEST_CASE("mopso fixed seed replay is deterministic") {
  auto snapshot = [](std::uint64_t seed) {
    Instance inst = make_cvrp_instance(203, 15);
    auto run = make_run(inst, TargetAlgorithm::MopsoCvrp, ObjectiveSet::Bi);
    Rng rng(seed);
    run->init(12, rng);
    for (int g = 0; g < 8; ++g) {
      const double params[3] = {2.0, 2.0, 0.7};
      run->step(params, rng);
    }
    return run->population_objectives();
  };
  CHECK(snapshot(1234) == snapshot(1234));
}

TEST_CASE("operator fuzzing: every produced genome satisfies its invariants") {
  const auto inst = generate_fjsp(400, 7, 3);
  Rng rng(47);
  auto pop = init_population_fjsp(inst, 10, rng);
  for (int t = 0; t < 3000; ++t) {
    auto [c1, c2] = crossover_fjsp(pop[rng.below(pop.size())], pop[rng.below(pop.size())], rng);
    mutate_fjsp(inst, c1, rng.uniform(), rng);
    mutate_fjsp(inst, c2, rng.uniform(), rng);
    REQUIRE(genome_valid(inst, c1));
    REQUIRE(genome_valid(inst, c2));
    pop[rng.below(pop.size())] = c1;
  }
}
