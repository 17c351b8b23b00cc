#include "gsmodac/graphstate.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

#include "gsmodac/pareto.hpp"

namespace gsmodac {

NormalizationContext NormalizationContext::from_initial(
    std::span<const ObjectiveVector> initial) {
  if (initial.empty()) {
    throw std::invalid_argument("normalization context: empty initial generation");
  }
  NormalizationContext ctx;
  ctx.best_so_far = initial[0];
  ctx.worst_initial = initial[0];
  for (const auto& v : initial) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      ctx.best_so_far[i] = std::min(ctx.best_so_far[i], v[i]);
      ctx.worst_initial[i] = std::max(ctx.worst_initial[i], v[i]);
    }
  }
  return ctx;
}

void NormalizationContext::update(std::span<const ObjectiveVector> objs) {
  for (const auto& v : objs) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      best_so_far[i] = std::min(best_so_far[i], v[i]);
    }
  }
}

ObjectiveVector normalize_objectives(const ObjectiveVector& v, const NormalizationContext& ctx) {
  ObjectiveVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double denom = ctx.worst_initial[i] - ctx.best_so_far[i];
    if (denom <= 0.0) {
      out[i] = 0.0;
      continue;
    }
    out[i] = std::clamp((v[i] - ctx.best_so_far[i]) / denom, 0.0, 1.0);
  }
  return out;
}

StateGraph build_state_graph(std::span<const ObjectiveVector> population,
                             const NormalizationContext& ctx, std::size_t generation,
                             std::size_t total_generations) {
  StateGraph g;
  g.node_features.reserve(population.size());
  for (const auto& v : population) g.node_features.push_back(normalize_objectives(v, ctx));

  const FrontPartition part = non_dominated_sort(population);
  for (const auto& front : part.fronts) {
    for (std::size_t a = 0; a < front.size(); ++a) {
      for (std::size_t b = a + 1; b < front.size(); ++b) {
        g.edges.emplace_back(static_cast<int>(front[a]), static_cast<int>(front[b]));
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end());

  g.budget_feature = total_generations == 0
                         ? 0.0
                         : static_cast<double>(generation) / static_cast<double>(total_generations);
  return g;
}

std::string state_graph_to_json(const StateGraph& graph) {
  nlohmann::json j;
  j["nodes"] = graph.node_features;
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [a, b] : graph.edges) edges.push_back(nlohmann::json::array({a, b}));
  j["edges"] = std::move(edges);
  j["budget"] = graph.budget_feature;
  return j.dump(2) + "\n";
}

}  // namespace gsmodac
