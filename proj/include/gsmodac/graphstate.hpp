#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gsmodac/objective_vector.hpp"

namespace gsmodac {

// Per-episode normalization window: best objective values encountered so
// far and the worst values of the initial generation.
struct NormalizationContext {
  ObjectiveVector best_so_far;
  ObjectiveVector worst_initial;

  static NormalizationContext from_initial(std::span<const ObjectiveVector> initial);
  void update(std::span<const ObjectiveVector> objs);  // lowers best_so_far
};

// (v - best) / (worst - best) per coordinate, clamped into [0,1];
// a degenerate window maps the coordinate to 0.
ObjectiveVector normalize_objectives(const ObjectiveVector& v, const NormalizationContext& ctx);

// GNN input: one node per population member carrying normalized objectives,
// complete undirected subgraph per Pareto front (no self-loops stored), and
// the elapsed-budget scalar.
struct StateGraph {
  std::vector<ObjectiveVector> node_features;        // [num_solutions][num_objectives]
  std::vector<std::pair<int, int>> edges;            // i < j, same-front pairs only
  double budget_feature = 0.0;                       // generation / total_generations

  std::size_t num_nodes() const { return node_features.size(); }
};

StateGraph build_state_graph(std::span<const ObjectiveVector> population,
                             const NormalizationContext& ctx, std::size_t generation,
                             std::size_t total_generations);

std::string state_graph_to_json(const StateGraph& graph);

}  // namespace gsmodac
