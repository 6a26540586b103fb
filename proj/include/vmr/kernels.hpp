#pragma once

#include <span>
#include <vector>

#include "vmr/feasibility.hpp"
#include "vmr/instance.hpp"
#include "vmr/objectives.hpp"

// Data-parallel kernels used by the metaheuristic. Each OpenMP kernel has a
// serial twin with identical output; the serial versions are the reference
// for tests and benchmarks.

namespace vmr {

struct Neighbour {
  int vm = 0;
  int machine = 0;
  ObjectiveVector objectives;

  bool operator==(const Neighbour&) const = default;
};

/// Every feasible single move (one VM to another machine) of a feasible
/// assignment, with its objective vector, ordered by (vm, machine).
std::vector<Neighbour> scan_neighbourhood(const Instance& inst, const Assignment& a);
std::vector<Neighbour> scan_neighbourhood_serial(const Instance& inst, const Assignment& a);

/// Objective vector after the move, in O(R) from the usage of `a`.
ObjectiveVector evaluate_move(const Instance& inst, const Assignment& a, const UsageTable& u,
                              const std::vector<int>& hosted, const ObjectiveVector& base, int v, int m);

struct Candidate {
  Assignment assignment;
  bool feasible = false;
  ObjectiveVector objectives;  // valid when feasible

  bool operator==(const Candidate&) const = default;
};

/// Greedy repair of an infeasible assignment: up to `max_passes` passes, each
/// moving VMs involved in violations to the machine that most reduces the
/// violation total (ties by marginal cost). Deterministic.
Assignment repair(const Instance& inst, Assignment a, int max_passes);

/// Repair (if needed), check and evaluate every assignment.
std::vector<Candidate> evaluate_batch(const Instance& inst, std::span<const Assignment> batch, int max_repair_passes);
std::vector<Candidate> evaluate_batch_serial(const Instance& inst, std::span<const Assignment> batch,
                                             int max_repair_passes);

/// Number of threads the OpenMP kernels use (1 without OpenMP).
int kernel_threads();
void set_kernel_threads(int n);

}  // namespace vmr
