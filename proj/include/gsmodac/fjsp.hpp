#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsmodac/objective_vector.hpp"
#include "gsmodac/rng.hpp"

namespace gsmodac {

enum class ObjectiveSet { Bi = 2, Tri = 3, Penta = 5 };

inline int objective_count(ObjectiveSet s) { return static_cast<int>(s); }

ObjectiveSet objective_set_from_string(const std::string& name);
std::string to_string(ObjectiveSet s);

// One eligible (machine, processing time) alternative of an operation.
struct MachineOption {
  int machine = 0;
  int time = 0;
};

struct FjspGenCfg {
  int min_ops_per_job = 4;
  int max_ops_per_job = 8;
  int min_time = 2;
  int max_time = 20;
};

struct FjspInstance {
  int num_jobs = 0;
  int num_machines = 0;
  // options[job][op] lists the eligible machines; every operation has at
  // least one entry.
  std::vector<std::vector<std::vector<MachineOption>>> options;

  int ops_of_job(int job) const { return static_cast<int>(options[static_cast<std::size_t>(job)].size()); }
  int total_ops() const;
  void validate() const;  // throws on violated instance invariants
};

FjspInstance generate_fjsp(std::uint64_t seed, int num_jobs, int num_machines,
                           const FjspGenCfg& cfg = {});

struct ScheduledOp {
  int job = 0;
  int op = 0;
  int machine = 0;
  int start = 0;
  int end = 0;
};

struct FjspSchedule {
  std::vector<ScheduledOp> ops;  // in placement order
};

// Semi-active decoding: ops are placed in the given operation-sequence order
// at the earliest start respecting machine availability and job precedence.
// machine_selection[flat_op] indexes into that operation's eligible-machine
// list (job-major flattening); operation_sequence holds job ids, the k-th
// occurrence of job i meaning operation (i, k).
FjspSchedule decode_fjsp(const FjspInstance& inst,
                         const std::vector<int>& machine_selection,
                         const std::vector<int>& operation_sequence);

// Validates feasibility (precedence, machine exclusivity, eligibility,
// durations, completeness) and evaluates
// [C_max, W_bal, F_avg, W_total, F_max] truncated to the active set.
// Throws std::invalid_argument naming the violated constraint.
ObjectiveVector evaluate_fjsp(const FjspInstance& inst, const FjspSchedule& schedule,
                              ObjectiveSet set);

}  // namespace gsmodac
