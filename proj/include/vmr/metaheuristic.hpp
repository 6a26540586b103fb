#pragma once

#include <cstdint>
#include <vector>

#include "vmr/instance.hpp"
#include "vmr/objectives.hpp"
#include "vmr/pareto.hpp"

namespace vmr {

struct Member {
  Assignment assignment;
  ObjectiveVector objectives;

  bool operator==(const Member&) const = default;
};

struct Population {
  std::vector<Member> members;
  std::size_t capacity = 20;

  bool operator==(const Population&) const = default;
};

struct MetaConfig {
  int population_size = 20;
  int generations = 10;
  int pls_targets = 10;
  std::uint64_t seed = 1;
  double crossover_rate = 0.9;
  // Per-VM mutation probability; <= 0 selects 2 / |V|.
  double mutation_rate = 0.0;
  int rcl_width = 3;
  int repair_passes = 2;
  int grasp_restarts = 10;
  // Wall-clock cap for evolve + PLS; <= 0 means none.
  double time_limit_s = 0.0;
  bool parallel = true;

  void validate() const;
};

/// Randomised greedy construction. The first member is always the initial
/// assignment; the others are built VM by VM choosing uniformly among the
/// `rcl_width` cheapest feasible machines under a random weight vector drawn
/// per restart. Slots that cannot be built are filled with the initial
/// assignment.
Population grasp_seed(const Instance& inst, int count, std::uint64_t rng_seed, int rcl_width = 3,
                      int max_restarts = 10);

/// Non-domination rank (0 = first front) of each point.
std::vector<int> non_dominated_ranks(const std::vector<ObjectiveVector>& points);

/// Crowding distance of each point within `points`; boundary points get +inf.
std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& points);

/// Keeps `capacity` members by rank, truncating the last front by crowding.
Population select_survivors(std::vector<Member> pool, std::size_t capacity);

struct EvolveResult {
  Population population;
  ParetoArchive archive;  // every feasible point evaluated, including the input
};

/// NSGA-II generations: binary tournament on (rank, crowding), uniform
/// crossover, per-VM mutation, repair-or-discard, elitist survivor selection.
EvolveResult evolve(const Instance& inst, const Population& pop, const MetaConfig& cfg);

/// One Pareto local search pass over the `targets` most isolated members.
ParetoArchive pls_refine(const Instance& inst, const ParetoArchive& archive, int targets, std::uint64_t rng_seed,
                         bool parallel = true);

/// Seeding from `bootstrap` (topped up greedily), evolution, then PLS.
ParetoArchive hybrid_pipeline(const Instance& inst, const ParetoArchive& bootstrap, const MetaConfig& cfg);

}  // namespace vmr
