#include "vmr/metaheuristic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>

#include "vmr/feasibility.hpp"
#include "vmr/kernels.hpp"
#include "vmr/partial_state.hpp"

namespace vmr {

void MetaConfig::validate() const {
  if (population_size < 1 || generations < 0 || pls_targets < 0) {
    throw std::invalid_argument("meta config: counts must be positive");
  }
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) throw std::invalid_argument("crossover rate must lie in [0, 1]");
  if (!(mutation_rate <= 1.0)) throw std::invalid_argument("mutation rate must not exceed 1");
  if (rcl_width < 1 || repair_passes < 0 || grasp_restarts < 1) throw std::invalid_argument("meta config: bad GRASP/repair setting");
}

namespace {

using Rng = std::mt19937_64;
using Clock = std::chrono::steady_clock;

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double uniform_real(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

WeightVector random_weights(Rng& rng) {
  // Uniform on the simplex via normalised exponentials; the floor keeps the
  // vector away from all-zero.
  double e[3];
  for (double& x : e) x = -std::log(1.0 - uniform_real(rng)) + 1e-6;
  const double sum = e[0] + e[1] + e[2];
  return {e[0] / sum, e[1] / sum, e[2] / sum};
}

std::optional<Assignment> grasp_build(const Instance& inst, Rng& rng, int rcl_width) {
  const WeightVector w = random_weights(rng);
  std::vector<int> order(inst.vms.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  PartialState state(inst);
  std::vector<std::pair<double, int>> options;
  for (int v : order) {
    options.clear();
    for (int m = 0; m < inst.num_machines(); ++m) {
      if (!state.can_place(v, m)) continue;
      const double cost = state.marginal_cost(v, m, w);
      const bool ok = state.place_checked(v, m);
      state.unplace(v);
      if (ok) options.emplace_back(cost, m);
    }
    if (options.empty()) return std::nullopt;
    std::sort(options.begin(), options.end());
    const int width = std::min<int>(rcl_width, static_cast<int>(options.size()));
    state.place(v, options[static_cast<std::size_t>(uniform_int(rng, 0, width - 1))].second);
  }
  if (!state.placement_rules_hold()) return std::nullopt;
  return state.to_assignment();
}

std::vector<ObjectiveVector> objectives_of(const std::vector<Member>& members) {
  std::vector<ObjectiveVector> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(m.objectives);
  return out;
}

// Better in (rank, crowding), ties to the lower index.
bool tournament_better(int a, int b, const std::vector<int>& rank, const std::vector<double>& crowd) {
  if (rank[static_cast<std::size_t>(a)] != rank[static_cast<std::size_t>(b)]) {
    return rank[static_cast<std::size_t>(a)] < rank[static_cast<std::size_t>(b)];
  }
  if (crowd[static_cast<std::size_t>(a)] != crowd[static_cast<std::size_t>(b)]) {
    return crowd[static_cast<std::size_t>(a)] > crowd[static_cast<std::size_t>(b)];
  }
  return a < b;
}

bool out_of_time(Clock::time_point start, double limit_s) {
  return limit_s > 0.0 && std::chrono::duration<double>(Clock::now() - start).count() >= limit_s;
}

}  // namespace

Population grasp_seed(const Instance& inst, int count, std::uint64_t rng_seed, int rcl_width, int max_restarts) {
  if (count < 1) throw std::invalid_argument("grasp_seed: count must be positive");
  Rng rng(rng_seed);
  Population pop;
  pop.capacity = static_cast<std::size_t>(count);
  const Assignment initial = initial_assignment(inst);
  pop.members.push_back({initial, evaluate(inst, initial)});
  while (static_cast<int>(pop.members.size()) < count) {
    std::optional<Assignment> built;
    for (int attempt = 0; attempt < max_restarts && !built; ++attempt) built = grasp_build(inst, rng, rcl_width);
    const Assignment a = built ? *built : initial;
    pop.members.push_back({a, evaluate(inst, a)});
  }
  return pop;
}

std::vector<int> non_dominated_ranks(const std::vector<ObjectiveVector>& points) {
  const std::size_t n = points.size();
  std::vector<int> rank(n, 0);
  std::vector<int> dominated_by(n, 0);
  std::vector<std::vector<std::size_t>> dominates_list(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && dominates(points[i], points[j])) {
        dominates_list[i].push_back(j);
        ++dominated_by[j];
      }
    }
  }
  std::vector<std::size_t> front;
  for (std::size_t i = 0; i < n; ++i) {
    if (dominated_by[i] == 0) front.push_back(i);
  }
  for (int r = 0; !front.empty(); ++r) {
    std::vector<std::size_t> next;
    for (std::size_t i : front) {
      rank[i] = r;
      for (std::size_t j : dominates_list[i]) {
        if (--dominated_by[j] == 0) next.push_back(j);
      }
    }
    front = std::move(next);
  }
  return rank;
}

std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& points) {
  const std::size_t n = points.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, 0.0);
  if (n <= 2) {
    std::fill(dist.begin(), dist.end(), inf);
    return dist;
  }
  std::vector<std::size_t> order(n);
  for (int k = 0; k < kNumObjectives; ++k) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a][k] < points[b][k]; });
    const double lo = points[order.front()][k];
    const double hi = points[order.back()][k];
    dist[order.front()] = inf;
    dist[order.back()] = inf;
    if (hi <= lo) continue;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      dist[order[i]] += (points[order[i + 1]][k] - points[order[i - 1]][k]) / (hi - lo);
    }
  }
  return dist;
}

Population select_survivors(std::vector<Member> pool, std::size_t capacity) {
  Population out;
  out.capacity = capacity;
  const auto rank = non_dominated_ranks(objectives_of(pool));
  const int max_rank = rank.empty() ? -1 : *std::max_element(rank.begin(), rank.end());
  for (int r = 0; r <= max_rank && out.members.size() < capacity; ++r) {
    std::vector<Member> front;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (rank[i] == r) front.push_back(pool[i]);
    }
    if (out.members.size() + front.size() <= capacity) {
      out.members.insert(out.members.end(), front.begin(), front.end());
      continue;
    }
    const auto crowd = crowding_distance(objectives_of(front));
    std::vector<std::size_t> order(front.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return crowd[a] > crowd[b]; });
    for (std::size_t i = 0; out.members.size() < capacity; ++i) out.members.push_back(front[order[i]]);
  }
  return out;
}

EvolveResult evolve(const Instance& inst, const Population& pop, const MetaConfig& cfg) {
  cfg.validate();
  if (pop.members.empty()) throw std::invalid_argument("evolve: empty population");
  const auto start = Clock::now();
  const auto size = static_cast<std::size_t>(cfg.population_size);
  const int n_vms = inst.num_vms();
  const int n_machines = inst.num_machines();
  const double mutation = cfg.mutation_rate > 0.0 ? cfg.mutation_rate : (n_vms > 0 ? std::min(1.0, 2.0 / n_vms) : 0.0);

  EvolveResult result;
  for (const auto& m : pop.members) result.archive.insert(m.assignment, m.objectives);
  result.population = select_survivors(pop.members, size);

  Rng rng(cfg.seed);
  std::vector<Assignment> offspring;
  for (int gen = 0; gen < cfg.generations && !out_of_time(start, cfg.time_limit_s); ++gen) {
    const auto& members = result.population.members;
    const auto points = objectives_of(members);
    const auto rank = non_dominated_ranks(points);
    const auto crowd = crowding_distance(points);
    const int last = static_cast<int>(members.size()) - 1;
    auto pick = [&] {
      const int a = uniform_int(rng, 0, last);
      const int b = uniform_int(rng, 0, last);
      return tournament_better(a, b, rank, crowd) ? a : b;
    };

    offspring.clear();
    while (offspring.size() < size) {
      const Assignment& p1 = members[static_cast<std::size_t>(pick())].assignment;
      const Assignment& p2 = members[static_cast<std::size_t>(pick())].assignment;
      Assignment child = p1;
      if (uniform_real(rng) < cfg.crossover_rate) {
        for (int v = 0; v < n_vms; ++v) {
          if (uniform_real(rng) < 0.5) child[v] = p2[v];
        }
      }
      if (n_machines > 1) {
        for (int v = 0; v < n_vms; ++v) {
          if (uniform_real(rng) >= mutation) continue;
          const int m = uniform_int(rng, 0, n_machines - 2);
          child[v] = m >= child[v] ? m + 1 : m;
        }
      }
      offspring.push_back(std::move(child));
    }

    const auto candidates = cfg.parallel ? evaluate_batch(inst, offspring, cfg.repair_passes)
                                         : evaluate_batch_serial(inst, offspring, cfg.repair_passes);

    std::vector<Member> pool = members;
    std::set<Assignment> seen;
    for (const auto& m : pool) seen.insert(m.assignment);
    for (const auto& c : candidates) {
      if (!c.feasible) continue;
      result.archive.insert(c.assignment, c.objectives);
      if (seen.insert(c.assignment).second) pool.push_back({c.assignment, c.objectives});
    }
    result.population = select_survivors(std::move(pool), size);
  }
  return result;
}

ParetoArchive pls_refine(const Instance& inst, const ParetoArchive& archive, int targets, std::uint64_t rng_seed,
                         bool parallel) {
  ParetoArchive out = archive;
  if (archive.empty() || targets <= 0) return out;
  const auto entries = archive.canonical();
  std::vector<ObjectiveVector> points;
  for (const auto& e : entries) points.push_back(e.objectives);
  const auto crowd = crowding_distance(points);

  // Random order first so that equal isolation is broken by the seed.
  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(rng_seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return crowd[a] > crowd[b]; });
  order.resize(std::min(order.size(), static_cast<std::size_t>(targets)));

  for (std::size_t idx : order) {
    const ArchiveEntry& target = entries[idx];
    const auto moves = parallel ? scan_neighbourhood(inst, target.assignment) : scan_neighbourhood_serial(inst, target.assignment);
    for (const auto& n : moves) {
      if (dominates(target.objectives, n.objectives)) continue;
      Assignment a = target.assignment;
      a[n.vm] = n.machine;
      // Stored objective values always come from the full evaluation.
      out.insert(a, evaluate(inst, a));
    }
  }
  return out;
}

ParetoArchive hybrid_pipeline(const Instance& inst, const ParetoArchive& bootstrap, const MetaConfig& cfg) {
  cfg.validate();
  const auto start = Clock::now();
  const auto size = static_cast<std::size_t>(cfg.population_size);
  std::vector<Member> seeds;
  for (const auto& e : bootstrap.canonical()) seeds.push_back({e.assignment, e.objectives});
  Population pop = select_survivors(std::move(seeds), size);
  if (pop.members.size() < size) {
    const auto fill = grasp_seed(inst, static_cast<int>(size - pop.members.size()), cfg.seed, cfg.rcl_width,
                                 cfg.grasp_restarts);
    pop.members.insert(pop.members.end(), fill.members.begin(), fill.members.end());
  }
  pop.capacity = size;

  MetaConfig evolve_cfg = cfg;
  if (cfg.time_limit_s > 0.0) {
    evolve_cfg.time_limit_s = std::max(1e-9, cfg.time_limit_s - std::chrono::duration<double>(Clock::now() - start).count());
  }
  const EvolveResult evolved = evolve(inst, pop, evolve_cfg);
  ParetoArchive front = bootstrap;
  front.merge(evolved.archive);
  return pls_refine(inst, front, cfg.pls_targets, cfg.seed + 1, cfg.parallel);
}

}  // namespace vmr
