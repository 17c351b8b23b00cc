#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "gsmodac/cvrp.hpp"
#include "gsmodac/fjsp.hpp"
#include "gsmodac/objective_vector.hpp"

namespace gsmodac {

// Evaluation metadata attached to an instance by a bootstrap run. The
// reference point is the component-wise worst of generation 0 of a
// canonical seed-0 vanilla run; the ideal point is the component-wise best
// observed during an extended-budget vanilla run.
struct InstanceMeta {
  ObjectiveVector reference_point;
  ObjectiveVector ideal_point;
  std::uint64_t source_seed = 0;
  std::string algorithm;  // which EA produced the bootstrap
};

// A problem instance plus its generation seed and any bootstrapped metadata.
// Meta is keyed by objective set because reference/ideal points have the
// dimensionality of the active objective configuration.
struct Instance {
  std::string kind;  // "fjsp" | "cvrp"
  std::uint64_t seed = 0;
  std::variant<FjspInstance, CvrpInstance> data;
  std::map<std::string, InstanceMeta> meta;

  const FjspInstance& fjsp() const { return std::get<FjspInstance>(data); }
  const CvrpInstance& cvrp() const { return std::get<CvrpInstance>(data); }
  bool is_fjsp() const { return kind == "fjsp"; }

  std::optional<InstanceMeta> meta_for(ObjectiveSet set) const;
};

std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

void save_instance(const Instance& inst, const std::string& path);
Instance load_instance(const std::string& path);

}  // namespace gsmodac
