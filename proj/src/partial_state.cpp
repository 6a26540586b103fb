#include "vmr/partial_state.hpp"

#include <algorithm>
#include <cassert>

namespace vmr {

namespace {

std::size_t idx(int row, int col, int cols) {
  return static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(col);
}

double over(Amount usage, Amount safety) { return static_cast<double>(std::max<Amount>(0, usage - safety)); }

// Cheapest fractional way to cover `need` units from (unit cost, capacity)
// items; +infinity when the items cannot cover it.
double fractional_fill(std::vector<std::pair<double, Amount>>& items, Amount need) {
  std::sort(items.begin(), items.end());
  double cost = 0.0;
  for (const auto& [unit, cap] : items) {
    if (need <= 0) break;
    const Amount take = std::min(need, cap);
    cost += unit * static_cast<double>(take);
    need -= take;
  }
  return need > 0 ? kInfinity : cost;
}

}  // namespace

PartialState::PartialState(const Instance& inst)
    : inst_(&inst),
      target_(inst.vms.size(), kUnassigned),
      usage_(inst.num_machines(), inst.num_resources()),
      hosted_(inst.machines.size(), 0),
      service_on_machine_(static_cast<std::size_t>(inst.num_services()) * inst.machines.size(), 0),
      service_in_neigh_(static_cast<std::size_t>(inst.num_services()) * static_cast<std::size_t>(inst.n_neighborhoods), 0),
      service_in_loc_(static_cast<std::size_t>(inst.num_services()) * static_cast<std::size_t>(inst.n_locations), 0),
      distinct_locations_(inst.services.size(), 0),
      unassigned_in_service_(inst.services.size(), 0),
      min_demand_(inst.resources.size(), 0),
      remaining_demand_(inst.resources.size(), 0) {
  for (const auto& vm : inst.vms) {
    ++unassigned_in_service_[static_cast<std::size_t>(vm.service)];
    for (int r = 0; r < inst.num_resources(); ++r) {
      remaining_demand_[static_cast<std::size_t>(r)] += vm.demand[static_cast<std::size_t>(r)];
      if (inst.resources[static_cast<std::size_t>(r)].transient) usage_.at(vm.initial_machine, r) += vm.demand[static_cast<std::size_t>(r)];
    }
  }
  for (int r = 0; r < inst.num_resources(); ++r) {
    Amount lo = -1;
    for (const auto& vm : inst.vms) {
      const Amount d = vm.demand[static_cast<std::size_t>(r)];
      lo = lo < 0 ? d : std::min(lo, d);
    }
    min_demand_[static_cast<std::size_t>(r)] = std::max<Amount>(lo, 0);
  }
  services_pending_ = static_cast<int>(
      std::count_if(unassigned_in_service_.begin(), unassigned_in_service_.end(), [](int n) { return n > 0; }));
}

Amount PartialState::delta(int v, int m, int r) const {
  const auto& vm = inst_->vms[static_cast<std::size_t>(v)];
  if (inst_->resources[static_cast<std::size_t>(r)].transient && m == vm.initial_machine) return 0;
  return vm.demand[static_cast<std::size_t>(r)];
}

bool PartialState::can_place(int v, int m) const {
  const int s = inst_->vms[static_cast<std::size_t>(v)].service;
  if (service_on_machine_[idx(s, m, inst_->num_machines())] > 0) return false;
  const auto& cap = inst_->machines[static_cast<std::size_t>(m)].capacity;
  for (int r = 0; r < inst_->num_resources(); ++r) {
    if (usage_.at(m, r) + delta(v, m, r) > cap[static_cast<std::size_t>(r)]) return false;
  }
  return true;
}

double PartialState::marginal_cost(int v, int m, const WeightVector& w) const {
  const auto& mc = inst_->machines[static_cast<std::size_t>(m)];
  double reliability = 0.0;
  for (int r = 0; r < inst_->num_resources(); ++r) {
    const Amount u = usage_.at(m, r);
    const Amount sc = mc.safety_capacity[static_cast<std::size_t>(r)];
    reliability += over(u + delta(v, m, r), sc) - over(u, sc);
  }
  const double idle = hosted_[static_cast<std::size_t>(m)] == 0 ? mc.elec_idle : 0.0;
  const double electricity =
      mc.elec_price * (idle + mc.elec_per_cpu * static_cast<double>(delta(v, m, inst_->cpu_resource)));
  return w.reliability() * reliability + w.electricity() * electricity + w.migration() * move_cost(*inst_, v, m);
}

void PartialState::place(int v, int m) {
  assert(target_[static_cast<std::size_t>(v)] == kUnassigned);
  const auto& vm = inst_->vms[static_cast<std::size_t>(v)];
  const auto& mc = inst_->machines[static_cast<std::size_t>(m)];
  const int s = vm.service;
  target_[static_cast<std::size_t>(v)] = m;
  ++assigned_;
  for (int r = 0; r < inst_->num_resources(); ++r) {
    usage_.at(m, r) += delta(v, m, r);
    remaining_demand_[static_cast<std::size_t>(r)] -= vm.demand[static_cast<std::size_t>(r)];
  }
  ++hosted_[static_cast<std::size_t>(m)];
  ++service_on_machine_[idx(s, m, inst_->num_machines())];
  ++service_in_neigh_[idx(s, mc.neighborhood, inst_->n_neighborhoods)];
  if (service_in_loc_[idx(s, mc.location, inst_->n_locations)]++ == 0) ++distinct_locations_[static_cast<std::size_t>(s)];
  if (--unassigned_in_service_[static_cast<std::size_t>(s)] == 0) --services_pending_;
  migration_ += move_cost(*inst_, v, m);
}

void PartialState::unplace(int v) {
  const int m = target_[static_cast<std::size_t>(v)];
  assert(m != kUnassigned);
  const auto& vm = inst_->vms[static_cast<std::size_t>(v)];
  const auto& mc = inst_->machines[static_cast<std::size_t>(m)];
  const int s = vm.service;
  target_[static_cast<std::size_t>(v)] = kUnassigned;
  --assigned_;
  for (int r = 0; r < inst_->num_resources(); ++r) {
    usage_.at(m, r) -= delta(v, m, r);
    remaining_demand_[static_cast<std::size_t>(r)] += vm.demand[static_cast<std::size_t>(r)];
  }
  --hosted_[static_cast<std::size_t>(m)];
  --service_on_machine_[idx(s, m, inst_->num_machines())];
  --service_in_neigh_[idx(s, mc.neighborhood, inst_->n_neighborhoods)];
  if (--service_in_loc_[idx(s, mc.location, inst_->n_locations)] == 0) --distinct_locations_[static_cast<std::size_t>(s)];
  if (unassigned_in_service_[static_cast<std::size_t>(s)]++ == 0) ++services_pending_;
  migration_ -= move_cost(*inst_, v, m);
  if (assigned_ == 0) migration_ = 0.0;  // drop accumulated rounding
}

int PartialState::missing_neighborhoods(int dependent, int provider) const {
  int missing = 0;
  const int N = inst_->n_neighborhoods;
  for (int n = 0; n < N; ++n) {
    if (service_in_neigh_[idx(dependent, n, N)] > 0 && service_in_neigh_[idx(provider, n, N)] == 0) ++missing;
  }
  return missing;
}

bool PartialState::necessary_conditions_hold(int s) const {
  const auto& svc = inst_->services[static_cast<std::size_t>(s)];
  const auto su = static_cast<std::size_t>(s);
  if (distinct_locations_[su] + unassigned_in_service_[su] < svc.spread_min) return false;
  for (int sj : svc.depends_on) {
    if (missing_neighborhoods(s, sj) > unassigned_in_service_[static_cast<std::size_t>(sj)]) return false;
  }
  for (int si : svc.dependents) {
    if (missing_neighborhoods(si, s) > unassigned_in_service_[su]) return false;
  }
  return true;
}

bool PartialState::place_checked(int v, int m) {
  place(v, m);
  return necessary_conditions_hold(inst_->vms[static_cast<std::size_t>(v)].service);
}

bool PartialState::all_necessary_conditions_hold() const {
  // Transient demand held on the initial hosts never goes away, so an
  // overloaded machine here rules out every completion.
  for (int m = 0; m < inst_->num_machines(); ++m) {
    const auto& cap = inst_->machines[static_cast<std::size_t>(m)].capacity;
    for (int r = 0; r < inst_->num_resources(); ++r) {
      if (usage_.at(m, r) > cap[static_cast<std::size_t>(r)]) return false;
    }
  }
  for (int s = 0; s < inst_->num_services(); ++s) {
    if (!necessary_conditions_hold(s)) return false;
  }
  return true;
}

bool PartialState::placement_rules_hold() const {
  for (int s = 0; s < inst_->num_services(); ++s) {
    const auto& svc = inst_->services[static_cast<std::size_t>(s)];
    if (distinct_locations_[static_cast<std::size_t>(s)] < svc.spread_min) return false;
    for (int sj : svc.depends_on) {
      if (missing_neighborhoods(s, sj) > 0) return false;
    }
  }
  return true;
}

ObjectiveVector PartialState::committed() const {
  ObjectiveVector o;
  for (int m = 0; m < inst_->num_machines(); ++m) {
    const auto& mc = inst_->machines[static_cast<std::size_t>(m)];
    for (int r = 0; r < inst_->num_resources(); ++r) o.reliability += over(usage_.at(m, r), mc.safety_capacity[static_cast<std::size_t>(r)]);
    const double idle = hosted_[static_cast<std::size_t>(m)] > 0 ? mc.elec_idle : 0.0;
    o.electricity += mc.elec_price * (idle + mc.elec_per_cpu * static_cast<double>(usage_.at(m, inst_->cpu_resource)));
  }
  o.migration = migration_;
  return o;
}

double PartialState::lower_bound(const WeightVector& w) const {
  const double base = scalarize(committed(), w);
  if (assigned_ == inst_->num_vms()) return base;
  double migration_floor = 0.0;
  const double per_vm = per_vm_bound(w, migration_floor);
  if (per_vm == kInfinity) return kInfinity;
  return std::max(base + per_vm, aggregate_bound(w, migration_floor));
}

// Sum over unassigned VMs of their cheapest placement. A VM landing on a
// machine that is still off also pays 1/k of its idle cost when at most k
// pending VMs fit on it together.
double PartialState::per_vm_bound(const WeightVector& w, double& migration_floor) const {
  const int M = inst_->num_machines();
  const int R = inst_->num_resources();
  const int remaining = inst_->num_vms() - assigned_;

  std::vector<double> opening(static_cast<std::size_t>(M), 0.0);
  for (int m = 0; m < M; ++m) {
    if (hosted_[static_cast<std::size_t>(m)] > 0) continue;
    const auto& mc = inst_->machines[static_cast<std::size_t>(m)];
    long long cap = std::min(remaining, services_pending_);
    for (int r = 0; r < R; ++r) {
      const Amount d = min_demand_[static_cast<std::size_t>(r)];
      if (inst_->resources[static_cast<std::size_t>(r)].transient || d <= 0) continue;
      cap = std::min<long long>(cap, (mc.capacity[static_cast<std::size_t>(r)] - usage_.at(m, r)) / d);
    }
    opening[static_cast<std::size_t>(m)] =
        w.electricity() * mc.elec_price * mc.elec_idle / static_cast<double>(std::max<long long>(cap, 1));
  }

  double total = 0.0;
  migration_floor = 0.0;
  for (int v = 0; v < inst_->num_vms(); ++v) {
    if (target_[static_cast<std::size_t>(v)] != kUnassigned) continue;
    double best = kInfinity;
    double cheapest_move = kInfinity;
    for (int m = 0; m < M; ++m) {
      if (!can_place(v, m)) continue;
      const double move = move_cost(*inst_, v, m);
      cheapest_move = std::min(cheapest_move, move);
      const auto& mc = inst_->machines[static_cast<std::size_t>(m)];
      double reliability = 0.0;
      for (int r = 0; r < R; ++r) {
        const Amount u = usage_.at(m, r);
        const Amount sc = mc.safety_capacity[static_cast<std::size_t>(r)];
        reliability += over(u + delta(v, m, r), sc) - over(u, sc);
      }
      const double cost = w.reliability() * reliability +
                          w.electricity() * mc.elec_price * mc.elec_per_cpu * static_cast<double>(delta(v, m, inst_->cpu_resource)) +
                          w.migration() * move + opening[static_cast<std::size_t>(m)];
      best = std::min(best, cost);
    }
    if (best == kInfinity) return kInfinity;
    total += best;
    migration_floor += cheapest_move;
  }
  return total;
}

double PartialState::aggregate_bound(const WeightVector& w, double migration_floor) const {
  const int M = inst_->num_machines();
  const int R = inst_->num_resources();
  const int cpu = inst_->cpu_resource;
  const auto& resources = inst_->resources;
  const ObjectiveVector base = committed();

  // Reliability: demand still to place beyond the headroom left under the
  // safety capacities must overflow somewhere.
  double reliability = base.reliability;
  for (int r = 0; r < R; ++r) {
    if (resources[static_cast<std::size_t>(r)].transient) continue;
    Amount headroom = 0;
    for (int m = 0; m < M; ++m) {
      headroom += std::max<Amount>(0, inst_->machines[static_cast<std::size_t>(m)].safety_capacity[static_cast<std::size_t>(r)] - usage_.at(m, r));
    }
    reliability += static_cast<double>(std::max<Amount>(0, remaining_demand_[static_cast<std::size_t>(r)] - headroom));
  }

  // Electricity splits into a CPU-proportional part and idle costs of
  // machines switched on later. Transient resources only grow on moves, so
  // they contribute nothing here.
  std::vector<double> off_idle;
  std::vector<std::pair<double, Amount>> fluid, joint;
  for (int m = 0; m < M; ++m) {
    const auto& mc = inst_->machines[static_cast<std::size_t>(m)];
    const double idle = mc.elec_price * mc.elec_idle;
    if (hosted_[static_cast<std::size_t>(m)] == 0) off_idle.push_back(idle);
    if (resources[static_cast<std::size_t>(cpu)].transient) continue;
    const Amount free = mc.capacity[static_cast<std::size_t>(cpu)] - usage_.at(m, cpu);
    if (free <= 0) continue;
    const double unit = mc.elec_price * mc.elec_per_cpu;
    fluid.emplace_back(unit, free);
    // Charging the idle cost per unit of capacity gives the fixed-charge
    // relaxation.
    joint.emplace_back(hosted_[static_cast<std::size_t>(m)] == 0 ? unit + idle / static_cast<double>(free) : unit, free);
  }
  std::sort(off_idle.begin(), off_idle.end());

  double variable = 0.0;
  double combined = 0.0;
  if (!resources[static_cast<std::size_t>(cpu)].transient) {
    variable = fractional_fill(fluid, remaining_demand_[static_cast<std::size_t>(cpu)]);
    combined = fractional_fill(joint, remaining_demand_[static_cast<std::size_t>(cpu)]);
    if (variable == kInfinity) return kInfinity;
  }

  double opening = 0.0;
  // Conflict: the unplaced members of a service need distinct machines.
  for (int s = 0; s < inst_->num_services(); ++s) {
    const int pending = unassigned_in_service_[static_cast<std::size_t>(s)];
    if (pending == 0) continue;
    int usable = 0;
    for (int m = 0; m < M; ++m) {
      if (hosted_[static_cast<std::size_t>(m)] > 0 && service_on_machine_[idx(s, m, M)] == 0) ++usable;
    }
    const int extra = pending - usable;
    if (extra <= 0) continue;
    if (extra > static_cast<int>(off_idle.size())) return kInfinity;
    double cost = 0.0;
    for (int i = 0; i < extra; ++i) cost += off_idle[static_cast<std::size_t>(i)];
    opening = std::max(opening, cost);
  }
  // Capacity: whatever the running machines cannot absorb needs new ones.
  for (int r = 0; r < R; ++r) {
    if (resources[static_cast<std::size_t>(r)].transient) continue;
    Amount need = remaining_demand_[static_cast<std::size_t>(r)];
    std::vector<std::pair<double, Amount>> cover;
    for (int m = 0; m < M; ++m) {
      const auto& mc = inst_->machines[static_cast<std::size_t>(m)];
      const Amount free = mc.capacity[static_cast<std::size_t>(r)] - usage_.at(m, r);
      if (hosted_[static_cast<std::size_t>(m)] > 0) {
        need -= std::max<Amount>(free, 0);
      } else if (free > 0) {
        cover.emplace_back(mc.elec_price * mc.elec_idle / static_cast<double>(free), free);
      }
    }
    if (need <= 0) continue;
    const double cost = fractional_fill(cover, need);
    if (cost == kInfinity) return kInfinity;
    opening = std::max(opening, cost);
  }

  const double electricity = base.electricity + std::max(variable + opening, combined);
  return w.reliability() * reliability + w.electricity() * electricity +
         w.migration() * (base.migration + migration_floor);
}

Assignment PartialState::to_assignment() const {
  assert(complete());
  return Assignment{target_};
}

double lower_bound(const Instance& inst, const WeightVector& w, const std::vector<int>& partial) {
  PartialState state(inst);
  for (int v = 0; v < inst.num_vms(); ++v) {
    const int m = partial[static_cast<std::size_t>(v)];
    if (m == kUnassigned) continue;
    if (!state.can_place(v, m)) return kInfinity;
    state.place(v, m);
  }
  if (!state.all_necessary_conditions_hold()) return kInfinity;
  if (state.complete() && !state.placement_rules_hold()) return kInfinity;
  return state.lower_bound(w);
}

}  // namespace vmr
