#include "vmr/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vmr {

namespace {

std::atomic<int> g_threads{0};

// Contribution of VM v to U[m, r] when it sits on `target`.
Amount contribution(const Instance& inst, const Vm& vm, int target, int m, int r) {
  const bool counted = target == m || (inst.resources[static_cast<std::size_t>(r)].transient && vm.initial_machine == m);
  return counted ? vm.demand[static_cast<std::size_t>(r)] : 0;
}

std::vector<int> hosted_counts(const Instance& inst, const Assignment& a) {
  std::vector<int> hosted(inst.machines.size(), 0);
  for (int m : a.target) ++hosted[static_cast<std::size_t>(m)];
  return hosted;
}

std::vector<Neighbour> moves_of(const Instance& inst, const Assignment& a, const UsageTable& u,
                                const std::vector<int>& hosted, const ObjectiveVector& base, int v) {
  std::vector<Neighbour> out;
  for (int m = 0; m < inst.num_machines(); ++m) {
    if (m == a[v]) continue;
    if (!check_move(inst, a, u, v, m).feasible) continue;
    out.push_back({v, m, evaluate_move(inst, a, u, hosted, base, v, m)});
  }
  return out;
}

std::vector<Neighbour> flatten(std::vector<std::vector<Neighbour>>& parts) {
  std::vector<Neighbour> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

Candidate make_candidate(const Instance& inst, const Assignment& a, int max_repair_passes) {
  Candidate c;
  c.assignment = is_feasible(inst, a) ? a : repair(inst, a, max_repair_passes);
  c.feasible = is_feasible(inst, c.assignment);
  if (c.feasible) c.objectives = evaluate(inst, c.assignment);
  return c;
}

}  // namespace

int kernel_threads() {
#ifdef _OPENMP
  const int n = g_threads.load();
  return n > 0 ? n : omp_get_max_threads();
#else
  return 1;
#endif
}

void set_kernel_threads(int n) { g_threads.store(std::max(n, 0)); }

ObjectiveVector evaluate_move(const Instance& inst, const Assignment& a, const UsageTable& u,
                              const std::vector<int>& hosted, const ObjectiveVector& base, int v, int m) {
  const Vm& vm = inst.vms[static_cast<std::size_t>(v)];
  const int src = a[v];
  if (src == m) return base;
  ObjectiveVector o = base;
  for (int machine : {src, m}) {
    const Machine& mc = inst.machines[static_cast<std::size_t>(machine)];
    for (int r = 0; r < inst.num_resources(); ++r) {
      const Amount before = u.at(machine, r);
      const Amount after = before - contribution(inst, vm, src, machine, r) + contribution(inst, vm, m, machine, r);
      const Amount sc = mc.safety_capacity[static_cast<std::size_t>(r)];
      o.reliability += static_cast<double>(std::max<Amount>(0, after - sc) - std::max<Amount>(0, before - sc));
      if (r == inst.cpu_resource) o.electricity += mc.elec_price * mc.elec_per_cpu * static_cast<double>(after - before);
    }
  }
  const Machine& from = inst.machines[static_cast<std::size_t>(src)];
  const Machine& to = inst.machines[static_cast<std::size_t>(m)];
  if (hosted[static_cast<std::size_t>(src)] == 1) o.electricity -= from.elec_price * from.elec_idle;
  if (hosted[static_cast<std::size_t>(m)] == 0) o.electricity += to.elec_price * to.elec_idle;
  o.migration += move_cost(inst, v, m) - move_cost(inst, v, src);
  return o;
}

std::vector<Neighbour> scan_neighbourhood_serial(const Instance& inst, const Assignment& a) {
  const UsageTable u = compute_usage(inst, a);
  const auto hosted = hosted_counts(inst, a);
  const ObjectiveVector base = evaluate(inst, a, u);
  std::vector<std::vector<Neighbour>> parts(inst.vms.size());
  for (int v = 0; v < inst.num_vms(); ++v) parts[static_cast<std::size_t>(v)] = moves_of(inst, a, u, hosted, base, v);
  return flatten(parts);
}

std::vector<Neighbour> scan_neighbourhood(const Instance& inst, const Assignment& a) {
  const UsageTable u = compute_usage(inst, a);
  const auto hosted = hosted_counts(inst, a);
  const ObjectiveVector base = evaluate(inst, a, u);
  std::vector<std::vector<Neighbour>> parts(inst.vms.size());
  const int n = inst.num_vms();
#pragma omp parallel for schedule(dynamic, 8) num_threads(kernel_threads())
  for (int v = 0; v < n; ++v) parts[static_cast<std::size_t>(v)] = moves_of(inst, a, u, hosted, base, v);
  return flatten(parts);
}

Assignment repair(const Instance& inst, Assignment a, int max_passes) {
  const WeightVector identity(1.0, 1.0, 1.0);
  for (int pass = 0; pass < max_passes; ++pass) {
    FeasibilityReport report = check(inst, a);
    if (report.feasible) break;

    // VMs touched by some violation, ascending.
    std::vector<char> involved(inst.vms.size(), 0);
    for (const auto& vio : report.violations) {
      const auto& sub = vio.subjects;
      switch (vio.kind) {
        case ViolationKind::capacity:
          for (int v = 0; v < inst.num_vms(); ++v) {
            if (a[v] == sub[0]) involved[static_cast<std::size_t>(v)] = 1;
          }
          break;
        case ViolationKind::conflict:
          for (int v : inst.services[static_cast<std::size_t>(sub[0])].members) {
            if (a[v] == sub[1]) involved[static_cast<std::size_t>(v)] = 1;
          }
          break;
        case ViolationKind::dependency:
          for (int s : {sub[0], sub[1]}) {
            for (int v : inst.services[static_cast<std::size_t>(s)].members) involved[static_cast<std::size_t>(v)] = 1;
          }
          break;
        case ViolationKind::spread:
          for (int v : inst.services[static_cast<std::size_t>(sub[0])].members) involved[static_cast<std::size_t>(v)] = 1;
          break;
      }
    }

    Amount total = report.total_amount();
    for (int v = 0; v < inst.num_vms() && total > 0; ++v) {
      if (!involved[static_cast<std::size_t>(v)]) continue;
      // Only strict reductions are taken; among those, smallest total, then
      // cheapest under the identity weights, then lowest machine id.
      const int current = a[v];
      int best_m = current;
      Amount best_total = total;
      double best_cost = std::numeric_limits<double>::infinity();
      for (int m = 0; m < inst.num_machines(); ++m) {
        if (m == current) continue;
        a[v] = m;
        const Amount t = check(inst, a).total_amount();
        if (t > best_total || (t == best_total && best_m == current)) continue;
        const double cost = scalarize(evaluate(inst, a), identity);
        if (t < best_total || cost < best_cost) {
          best_m = m;
          best_total = t;
          best_cost = cost;
        }
      }
      a[v] = best_m;
      total = best_total;
    }
  }
  return a;
}

std::vector<Candidate> evaluate_batch_serial(const Instance& inst, std::span<const Assignment> batch,
                                             int max_repair_passes) {
  std::vector<Candidate> out(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) out[i] = make_candidate(inst, batch[i], max_repair_passes);
  return out;
}

std::vector<Candidate> evaluate_batch(const Instance& inst, std::span<const Assignment> batch, int max_repair_passes) {
  std::vector<Candidate> out(batch.size());
  const auto n = static_cast<long long>(batch.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(kernel_threads())
  for (long long i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = make_candidate(inst, batch[static_cast<std::size_t>(i)], max_repair_passes);
  }
  return out;
}

}  // namespace vmr
