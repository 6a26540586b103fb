#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vmr/instance.hpp"
#include "vmr/objectives.hpp"
#include "vmr/pareto.hpp"

namespace vmr {

inline constexpr double kGapEpsilon = 1e-9;

struct SolverConfig {
  double gap = 0.0;  // relative tolerance in [0, 1]
  double time_limit_s = kInfinityTime;
  std::uint64_t node_limit = 0;  // 0 = unlimited; deterministic alternative to the clock
  bool pool_all_feasible = true;
  bool warm_start_initial = true;  // seed the incumbent with the initial assignment
  bool record_trace = false;
  // Open nodes kept for best-bound selection; beyond this the search
  // continues depth-first. 0 gives a pure depth-first search.
  std::size_t max_open_nodes = 200000;

  static constexpr double kInfinityTime = 1e300;

  void validate() const;
};

enum class SolveStatus { optimal_within_gap, time_limit, node_limit, infeasible, skipped };

const char* to_string(SolveStatus status);

struct Incumbent {
  Assignment assignment;
  ObjectiveVector objectives;
  double value = 0.0;
};

struct TracePoint {
  std::uint64_t node = 0;
  double incumbent = 0.0;
  double lower_bound = 0.0;
};

struct SolveReport {
  std::optional<Incumbent> incumbent;
  double lower_bound = 0.0;
  double achieved_gap = 0.0;
  std::vector<ArchiveEntry> pool;
  SolveStatus status = SolveStatus::infeasible;
  double elapsed_s = 0.0;
  std::uint64_t nodes_explored = 0;
  std::vector<TracePoint> trace;
};

/// (incumbent - bound) / max(|bound|, 1e-9).
double relative_gap(double incumbent, double bound);

/// Branch-and-bound on the VM-to-machine assignment tree.
///
/// VMs are branched in decreasing order of their largest demand. The search
/// dives into the child with the smallest marginal scalarized cost and resumes
/// from the open node with the smallest bound. The global bound is the
/// smallest bound among open nodes. The run stops when the relative gap drops
/// to cfg.gap, the tree is exhausted, or a limit fires.
SolveReport solve_weighted(const Instance& inst, const WeightVector& w, const SolverConfig& cfg);

struct VectorRun {
  WeightVector weights;
  SolveReport report;
};

struct MultiVectorResult {
  ParetoArchive archive;
  std::vector<VectorRun> runs;  // skipped vectors carry status skipped
};

/// Solves the first k weight vectors one after another inside `budget_s`,
/// merging every solution pool into one archive. With `parallel` set, distinct
/// vectors are solved concurrently; the merged archive does not depend on the
/// schedule as long as runs are bounded by node limits rather than the clock.
MultiVectorResult multi_vector_run(const Instance& inst, int k_vectors, const SolverConfig& cfg, double budget_s,
                                   bool parallel = false);

/// MILP model of the weighted problem in CPLEX LP format.
void export_lp(std::ostream& out, const Instance& inst, const WeightVector& w);
std::string export_lp_string(const Instance& inst, const WeightVector& w);

}  // namespace vmr
