#include "gsmodac/fjsp.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace gsmodac {

ObjectiveSet objective_set_from_string(const std::string& name) {
  if (name == "bi") return ObjectiveSet::Bi;
  if (name == "tri") return ObjectiveSet::Tri;
  if (name == "penta") return ObjectiveSet::Penta;
  throw std::invalid_argument("unknown objective set: " + name);
}

std::string to_string(ObjectiveSet s) {
  switch (s) {
    case ObjectiveSet::Bi: return "bi";
    case ObjectiveSet::Tri: return "tri";
    case ObjectiveSet::Penta: return "penta";
  }
  return "?";
}

int FjspInstance::total_ops() const {
  int n = 0;
  for (const auto& job : options) n += static_cast<int>(job.size());
  return n;
}

void FjspInstance::validate() const {
  if (num_jobs <= 0 || num_machines <= 0) {
    throw std::invalid_argument("fjsp instance: nonpositive job or machine count");
  }
  if (static_cast<int>(options.size()) != num_jobs) {
    throw std::invalid_argument("fjsp instance: job table size mismatch");
  }
  for (const auto& job : options) {
    if (job.empty()) throw std::invalid_argument("fjsp instance: job with no operations");
    for (const auto& op : job) {
      if (op.empty()) throw std::invalid_argument("fjsp instance: operation with no eligible machine");
      for (const auto& alt : op) {
        if (alt.machine < 0 || alt.machine >= num_machines) {
          throw std::invalid_argument("fjsp instance: machine index out of range");
        }
        if (alt.time <= 0) throw std::invalid_argument("fjsp instance: nonpositive processing time");
      }
    }
  }
}

FjspInstance generate_fjsp(std::uint64_t seed, int num_jobs, int num_machines,
                           const FjspGenCfg& cfg) {
  if (num_jobs <= 0 || num_machines <= 0) {
    throw std::invalid_argument("generate_fjsp: counts must be positive");
  }
  if (cfg.min_ops_per_job > cfg.max_ops_per_job || cfg.min_time > cfg.max_time ||
      cfg.min_ops_per_job <= 0 || cfg.min_time <= 0) {
    throw std::invalid_argument("generate_fjsp: invalid generation range");
  }
  Rng rng(derive_seed(seed, {0x464a5350ULL}));
  FjspInstance inst;
  inst.num_jobs = num_jobs;
  inst.num_machines = num_machines;
  inst.options.resize(static_cast<std::size_t>(num_jobs));
  for (int j = 0; j < num_jobs; ++j) {
    const int num_ops = rng.uniform_int(cfg.min_ops_per_job, cfg.max_ops_per_job);
    auto& job = inst.options[static_cast<std::size_t>(j)];
    job.resize(static_cast<std::size_t>(num_ops));
    for (auto& op : job) {
      const int subset = rng.uniform_int(1, num_machines);
      std::vector<int> machines = rng.sample_without_replacement(num_machines, subset);
      std::sort(machines.begin(), machines.end());
      op.reserve(machines.size());
      for (int m : machines) {
        op.push_back({m, rng.uniform_int(cfg.min_time, cfg.max_time)});
      }
    }
  }
  inst.validate();
  return inst;
}

FjspSchedule decode_fjsp(const FjspInstance& inst,
                         const std::vector<int>& machine_selection,
                         const std::vector<int>& operation_sequence) {
  const std::size_t total = static_cast<std::size_t>(inst.total_ops());
  if (machine_selection.size() != total || operation_sequence.size() != total) {
    throw std::invalid_argument("decode_fjsp: genome length mismatch");
  }
  std::vector<std::size_t> job_offset(static_cast<std::size_t>(inst.num_jobs), 0);
  for (int j = 1; j < inst.num_jobs; ++j) {
    job_offset[static_cast<std::size_t>(j)] =
        job_offset[static_cast<std::size_t>(j - 1)] +
        static_cast<std::size_t>(inst.ops_of_job(j - 1));
  }

  std::vector<int> next_op(static_cast<std::size_t>(inst.num_jobs), 0);
  std::vector<int> job_ready(static_cast<std::size_t>(inst.num_jobs), 0);
  std::vector<int> machine_ready(static_cast<std::size_t>(inst.num_machines), 0);

  FjspSchedule sched;
  sched.ops.reserve(total);
  for (int job : operation_sequence) {
    if (job < 0 || job >= inst.num_jobs) {
      throw std::invalid_argument("decode_fjsp: job id out of range in sequence");
    }
    const int op = next_op[static_cast<std::size_t>(job)]++;
    if (op >= inst.ops_of_job(job)) {
      throw std::invalid_argument("decode_fjsp: too many occurrences of job in sequence");
    }
    const auto& alts = inst.options[static_cast<std::size_t>(job)][static_cast<std::size_t>(op)];
    const int sel = machine_selection[job_offset[static_cast<std::size_t>(job)] + static_cast<std::size_t>(op)];
    if (sel < 0 || sel >= static_cast<int>(alts.size())) {
      throw std::invalid_argument("decode_fjsp: machine selection out of eligibility bounds");
    }
    const MachineOption& mo = alts[static_cast<std::size_t>(sel)];
    const int start = std::max(job_ready[static_cast<std::size_t>(job)],
                               machine_ready[static_cast<std::size_t>(mo.machine)]);
    const int end = start + mo.time;
    job_ready[static_cast<std::size_t>(job)] = end;
    machine_ready[static_cast<std::size_t>(mo.machine)] = end;
    sched.ops.push_back({job, op, mo.machine, start, end});
  }
  for (int j = 0; j < inst.num_jobs; ++j) {
    if (next_op[static_cast<std::size_t>(j)] != inst.ops_of_job(j)) {
      throw std::invalid_argument("decode_fjsp: sequence is not a permutation of the job multiset");
    }
  }
  return sched;
}

ObjectiveVector evaluate_fjsp(const FjspInstance& inst, const FjspSchedule& schedule,
                              ObjectiveSet set) {
  const std::size_t total = static_cast<std::size_t>(inst.total_ops());
  if (schedule.ops.size() != total) {
    throw std::invalid_argument("evaluate_fjsp: infeasible schedule: wrong operation count");
  }

  std::vector<std::vector<const ScheduledOp*>> per_job(static_cast<std::size_t>(inst.num_jobs));
  std::vector<std::vector<const ScheduledOp*>> per_machine(static_cast<std::size_t>(inst.num_machines));
  for (const auto& so : schedule.ops) {
    if (so.job < 0 || so.job >= inst.num_jobs || so.op < 0 || so.op >= inst.ops_of_job(so.job)) {
      throw std::invalid_argument("evaluate_fjsp: infeasible schedule: unknown operation");
    }
    if (so.machine < 0 || so.machine >= inst.num_machines) {
      throw std::invalid_argument("evaluate_fjsp: infeasible schedule: unknown machine");
    }
    const auto& alts = inst.options[static_cast<std::size_t>(so.job)][static_cast<std::size_t>(so.op)];
    const auto alt = std::find_if(alts.begin(), alts.end(),
                                  [&](const MachineOption& mo) { return mo.machine == so.machine; });
    if (alt == alts.end()) {
      throw std::invalid_argument("evaluate_fjsp: infeasible schedule: ineligible machine assignment");
    }
    if (so.end - so.start != alt->time) {
      throw std::invalid_argument("evaluate_fjsp: infeasible schedule: duration does not match processing time");
    }
    per_job[static_cast<std::size_t>(so.job)].push_back(&so);
    per_machine[static_cast<std::size_t>(so.machine)].push_back(&so);
  }

  for (int j = 0; j < inst.num_jobs; ++j) {
    auto& ops = per_job[static_cast<std::size_t>(j)];
    if (static_cast<int>(ops.size()) != inst.ops_of_job(j)) {
      throw std::invalid_argument("evaluate_fjsp: infeasible schedule: missing or duplicated operation");
    }
    std::sort(ops.begin(), ops.end(),
              [](const ScheduledOp* a, const ScheduledOp* b) { return a->op < b->op; });
    for (std::size_t k = 0; k < ops.size(); ++k) {
      if (ops[k]->op != static_cast<int>(k)) {
        throw std::invalid_argument("evaluate_fjsp: infeasible schedule: missing or duplicated operation");
      }
      if (k > 0 && ops[k]->start < ops[k - 1]->end) {
        throw std::invalid_argument("evaluate_fjsp: infeasible schedule: job precedence violated");
      }
    }
  }
  for (auto& ops : per_machine) {
    std::sort(ops.begin(), ops.end(),
              [](const ScheduledOp* a, const ScheduledOp* b) { return a->start < b->start; });
    for (std::size_t k = 1; k < ops.size(); ++k) {
      if (ops[k]->start < ops[k - 1]->end) {
        throw std::invalid_argument("evaluate_fjsp: infeasible schedule: machine overlap");
      }
    }
  }

  // Objectives: makespan, workload balance, average flowtime, total
  // workload, maximum flowtime.
  int c_max = 0;
  for (const auto& so : schedule.ops) c_max = std::max(c_max, so.end);

  int w_min = std::numeric_limits<int>::max();
  int w_max = 0;
  int w_total = 0;
  for (const auto& ops : per_machine) {
    int load = 0;
    for (const ScheduledOp* so : ops) load += so->end - so->start;
    w_min = std::min(w_min, load);
    w_max = std::max(w_max, load);
    w_total += load;
  }

  double f_sum = 0.0;
  double f_max = 0.0;
  for (const auto& ops : per_job) {
    const double flow = static_cast<double>(ops.back()->end - ops.front()->start);
    f_sum += flow;
    f_max = std::max(f_max, flow);
  }
  const double f_avg = f_sum / static_cast<double>(inst.num_jobs);

  ObjectiveVector full = {static_cast<double>(c_max), static_cast<double>(w_max - w_min),
                          f_avg, static_cast<double>(w_total), f_max};
  full.resize(static_cast<std::size_t>(objective_count(set)));
  return full;
}

}  // namespace gsmodac
