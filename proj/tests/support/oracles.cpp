#include "oracles.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace oracle {

std::vector<std::vector<long long>> usage(const vmr::Instance& inst, const std::vector<int>& target) {
  std::vector<std::vector<long long>> u(inst.machines.size(), std::vector<long long>(inst.resources.size(), 0));
  for (std::size_t v = 0; v < inst.vms.size(); ++v) {
    const auto& vm = inst.vms[v];
    for (std::size_t r = 0; r < inst.resources.size(); ++r) {
      const long long d = vm.demand[r];
      if (inst.resources[r].transient) {
        // Held at the original host throughout, and at the new host if moved.
        u[static_cast<std::size_t>(vm.initial_machine)][r] += d;
        if (target[v] != vm.initial_machine) u[static_cast<std::size_t>(target[v])][r] += d;
      } else {
        u[static_cast<std::size_t>(target[v])][r] += d;
      }
    }
  }
  return u;
}

Verdict judge(const vmr::Instance& inst, const std::vector<int>& target) {
  Verdict out;
  const auto u = usage(inst, target);
  for (std::size_t m = 0; m < inst.machines.size(); ++m) {
    for (std::size_t r = 0; r < inst.resources.size(); ++r) {
      if (u[m][r] > inst.machines[m].capacity[r]) out.capacity = false;
    }
  }

  const std::size_t V = inst.vms.size();
  for (std::size_t a = 0; a < V; ++a) {
    for (std::size_t b = a + 1; b < V; ++b) {
      if (inst.vms[a].service == inst.vms[b].service && target[a] == target[b]) out.conflict = false;
    }
  }

  auto present_in_neighbourhood = [&](int s, int n) {
    for (std::size_t v = 0; v < V; ++v) {
      if (inst.vms[v].service == s && inst.machines[static_cast<std::size_t>(target[v])].neighborhood == n) return true;
    }
    return false;
  };
  for (const auto& svc : inst.services) {
    for (int provider : svc.depends_on) {
      for (int n = 0; n < inst.n_neighborhoods; ++n) {
        if (present_in_neighbourhood(svc.id, n) && !present_in_neighbourhood(provider, n)) out.dependency = false;
      }
    }
  }

  for (const auto& svc : inst.services) {
    std::set<int> locations;
    for (std::size_t v = 0; v < V; ++v) {
      if (inst.vms[v].service == svc.id) locations.insert(inst.machines[static_cast<std::size_t>(target[v])].location);
    }
    if (static_cast<int>(locations.size()) < svc.spread_min) out.spread = false;
  }
  return out;
}

Point objectives(const vmr::Instance& inst, const std::vector<int>& target) {
  const auto u = usage(inst, target);
  Point p{0.0, 0.0, 0.0};
  for (std::size_t m = 0; m < inst.machines.size(); ++m) {
    const auto& mc = inst.machines[m];
    for (std::size_t r = 0; r < inst.resources.size(); ++r) {
      p[0] += static_cast<double>(std::max(0LL, u[m][r] - mc.safety_capacity[r]));
    }
    const bool on = std::find(target.begin(), target.end(), static_cast<int>(m)) != target.end();
    p[1] += mc.elec_price * ((on ? mc.elec_idle : 0.0) + mc.elec_per_cpu * static_cast<double>(u[m][static_cast<std::size_t>(inst.cpu_resource)]));
  }
  for (std::size_t v = 0; v < inst.vms.size(); ++v) {
    const auto& vm = inst.vms[v];
    if (target[v] == vm.initial_machine) continue;
    p[2] += vm.prep_cost + vm.deploy_cost +
            vm.transfer_size * inst.transfer_cost[static_cast<std::size_t>(vm.initial_machine) * inst.machines.size() +
                                                  static_cast<std::size_t>(target[v])];
  }
  return p;
}

void enumerate(const vmr::Instance& inst, const std::function<void(const std::vector<int>&)>& fn) {
  const std::size_t V = inst.vms.size();
  const int M = static_cast<int>(inst.machines.size());
  std::vector<int> t(V, 0);
  while (true) {
    fn(t);
    std::size_t i = 0;
    while (i < V && ++t[i] == M) t[i++] = 0;
    if (i == V) return;
  }
}

std::optional<double> optimum(const vmr::Instance& inst, const Point& w) {
  std::optional<double> best;
  enumerate(inst, [&](const std::vector<int>& t) {
    if (!feasible(inst, t)) return;
    const Point p = objectives(inst, t);
    const double value = w[0] * p[0] + w[1] * p[1] + w[2] * p[2];
    if (!best || value < *best) best = value;
  });
  return best;
}

bool dominates(const Point& a, const Point& b) {
  bool strict = false;
  for (int i = 0; i < 3; ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strict = true;
  }
  return strict;
}

std::vector<Point> nondominated(const std::vector<Point>& points) {
  std::set<Point> out;
  for (const auto& p : points) {
    bool dominated = false;
    for (const auto& q : points) {
      if (dominates(q, p)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.insert(p);
  }
  return {out.begin(), out.end()};
}

std::vector<Point> pareto_front(const vmr::Instance& inst) {
  std::vector<Point> all;
  enumerate(inst, [&](const std::vector<int>& t) {
    if (feasible(inst, t)) all.push_back(objectives(inst, t));
  });
  return nondominated(all);
}

double grid_hypervolume(const std::vector<Point>& points, const Point& ref) {
  std::array<std::vector<double>, 3> axis;
  for (int i = 0; i < 3; ++i) {
    for (const auto& p : points) axis[i].push_back(p[i]);
    axis[i].push_back(ref[i]);
    std::sort(axis[i].begin(), axis[i].end());
    axis[i].erase(std::unique(axis[i].begin(), axis[i].end()), axis[i].end());
  }
  double total = 0.0;
  for (std::size_t a = 0; a + 1 < axis[0].size(); ++a) {
    for (std::size_t b = 0; b + 1 < axis[1].size(); ++b) {
      for (std::size_t c = 0; c + 1 < axis[2].size(); ++c) {
        const Point corner{axis[0][a], axis[1][b], axis[2][c]};
        const bool covered = std::any_of(points.begin(), points.end(), [&](const Point& p) {
          return p[0] <= corner[0] && p[1] <= corner[1] && p[2] <= corner[2];
        });
        if (covered) {
          total += (axis[0][a + 1] - axis[0][a]) * (axis[1][b + 1] - axis[1][b]) * (axis[2][c + 1] - axis[2][c]);
        }
      }
    }
  }
  return total;
}

double mc_hypervolume(const std::vector<Point>& points, const Point& ref, std::size_t samples, std::uint64_t seed) {
  if (points.empty()) return 0.0;
  Point lo = points.front();
  for (const auto& p : points) {
    for (int i = 0; i < 3; ++i) lo[i] = std::min(lo[i], p[i]);
  }
  std::mt19937_64 rng(seed);
  std::array<std::uniform_real_distribution<double>, 3> dist{
      std::uniform_real_distribution<double>(lo[0], ref[0]), std::uniform_real_distribution<double>(lo[1], ref[1]),
      std::uniform_real_distribution<double>(lo[2], ref[2])};
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Point x{dist[0](rng), dist[1](rng), dist[2](rng)};
    for (const auto& p : points) {
      if (p[0] <= x[0] && p[1] <= x[1] && p[2] <= x[2]) {
        ++hits;
        break;
      }
    }
  }
  const double box = (ref[0] - lo[0]) * (ref[1] - lo[1]) * (ref[2] - lo[2]);
  return box * static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace oracle
