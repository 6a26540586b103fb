#include "vmr/feasibility.hpp"

#include <algorithm>
#include <numeric>

namespace vmr {

UsageTable compute_usage(const Instance& inst, const Assignment& a) {
  UsageTable u(inst.num_machines(), inst.num_resources());
  for (int v = 0; v < inst.num_vms(); ++v) {
    const auto& vm = inst.vms[static_cast<std::size_t>(v)];
    const int m = a[v];
    for (int r = 0; r < inst.num_resources(); ++r) {
      const Amount d = vm.demand[static_cast<std::size_t>(r)];
      if (inst.resources[static_cast<std::size_t>(r)].transient) {
        u.at(vm.initial_machine, r) += d;
        if (m != vm.initial_machine) u.at(m, r) += d;
      } else {
        u.at(m, r) += d;
      }
    }
  }
  return u;
}

void apply_move(const Instance& inst, const Assignment& a, UsageTable& u, int v, int m) {
  const auto& vm = inst.vms[static_cast<std::size_t>(v)];
  const int from = a[v];
  if (from == m) return;
  for (int r = 0; r < inst.num_resources(); ++r) {
    const Amount d = vm.demand[static_cast<std::size_t>(r)];
    if (inst.resources[static_cast<std::size_t>(r)].transient) {
      if (from != vm.initial_machine) u.at(from, r) -= d;
      if (m != vm.initial_machine) u.at(m, r) += d;
    } else {
      u.at(from, r) -= d;
      u.at(m, r) += d;
    }
  }
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::capacity: return "capacity";
    case ViolationKind::conflict: return "conflict";
    case ViolationKind::dependency: return "dependency";
    case ViolationKind::spread: return "spread";
  }
  return "?";
}

std::string describe(const Violation& v) {
  const auto& s = v.subjects;
  const auto amount = std::to_string(v.amount);
  switch (v.kind) {
    case ViolationKind::capacity:
      return "capacity m" + std::to_string(s[0]) + " r" + std::to_string(s[1]) + " exceeded by " + amount;
    case ViolationKind::conflict:
      return "conflict s" + std::to_string(s[0]) + " on m" + std::to_string(s[1]) + " (" + amount + " extra)";
    case ViolationKind::dependency:
      return "dependency s" + std::to_string(s[0]) + " -> s" + std::to_string(s[1]) + " missing in n" + std::to_string(s[2]);
    case ViolationKind::spread:
      return "spread s" + std::to_string(s[0]) + " short by " + amount + " location(s)";
  }
  return "?";
}

Amount FeasibilityReport::total_amount() const {
  return std::accumulate(violations.begin(), violations.end(), Amount{0},
                         [](Amount acc, const Violation& v) { return acc + v.amount; });
}

namespace {

template <class UsageOf>
void capacity_on(const Instance& inst, UsageOf usage_of, int m, std::vector<Violation>& out) {
  const auto& mc = inst.machines[static_cast<std::size_t>(m)];
  for (int r = 0; r < inst.num_resources(); ++r) {
    const Amount excess = usage_of(m, r) - mc.capacity[static_cast<std::size_t>(r)];
    if (excess > 0) out.push_back({ViolationKind::capacity, {m, r}, excess});
  }
}

// Per-service rules, evaluated from the members' targets. `target_of` maps a
// VM to its machine in the (possibly mutated) assignment.
template <class TargetOf>
void conflict_of(const Instance& inst, int s, TargetOf target_of, std::vector<Violation>& out) {
  std::vector<int> machines;
  for (int v : inst.services[static_cast<std::size_t>(s)].members) machines.push_back(target_of(v));
  std::sort(machines.begin(), machines.end());
  for (std::size_t i = 0; i < machines.size();) {
    std::size_t j = i;
    while (j < machines.size() && machines[j] == machines[i]) ++j;
    if (j - i > 1) out.push_back({ViolationKind::conflict, {s, machines[i]}, static_cast<Amount>(j - i - 1)});
    i = j;
  }
}

template <class TargetOf>
std::vector<char> occupied(const Instance& inst, int s, TargetOf target_of, bool by_location) {
  std::vector<char> occ(static_cast<std::size_t>(by_location ? inst.n_locations : inst.n_neighborhoods), 0);
  for (int v : inst.services[static_cast<std::size_t>(s)].members) {
    const auto& mc = inst.machines[static_cast<std::size_t>(target_of(v))];
    occ[static_cast<std::size_t>(by_location ? mc.location : mc.neighborhood)] = 1;
  }
  return occ;
}

template <class TargetOf>
void spread_of(const Instance& inst, int s, TargetOf target_of, std::vector<Violation>& out) {
  const auto occ = occupied(inst, s, target_of, true);
  const auto count = std::count(occ.begin(), occ.end(), 1);
  const Amount shortfall = inst.services[static_cast<std::size_t>(s)].spread_min - count;
  if (shortfall > 0) out.push_back({ViolationKind::spread, {s}, shortfall});
}

template <class TargetOf>
void dependency_of(const Instance& inst, int si, int sj, TargetOf target_of, std::vector<Violation>& out) {
  const auto need = occupied(inst, si, target_of, false);
  const auto have = occupied(inst, sj, target_of, false);
  for (int n = 0; n < inst.n_neighborhoods; ++n) {
    if (need[static_cast<std::size_t>(n)] && !have[static_cast<std::size_t>(n)]) {
      out.push_back({ViolationKind::dependency, {si, sj, n}, 1});
    }
  }
}

FeasibilityReport finish(std::vector<Violation> violations) {
  std::sort(violations.begin(), violations.end());
  violations.erase(std::unique(violations.begin(), violations.end()), violations.end());
  FeasibilityReport report;
  report.feasible = violations.empty();
  report.violations = std::move(violations);
  return report;
}

}  // namespace

FeasibilityReport check(const Instance& inst, const Assignment& a) {
  const auto u = compute_usage(inst, a);
  const auto target_of = [&a](int v) { return a[v]; };
  std::vector<Violation> out;
  const auto usage_of = [&u](int m, int r) { return u.at(m, r); };
  for (int m = 0; m < inst.num_machines(); ++m) capacity_on(inst, usage_of, m, out);
  for (int s = 0; s < inst.num_services(); ++s) {
    conflict_of(inst, s, target_of, out);
    spread_of(inst, s, target_of, out);
    for (int sj : inst.services[static_cast<std::size_t>(s)].depends_on) dependency_of(inst, s, sj, target_of, out);
  }
  return finish(std::move(out));
}

bool is_feasible(const Instance& inst, const Assignment& a) { return check(inst, a).feasible; }

FeasibilityReport check_move(const Instance& inst, const Assignment& a, const UsageTable& u, int v, int m) {
  const int from = a[v];
  const auto& vm = inst.vms[static_cast<std::size_t>(v)];
  const auto target_of = [&a, v, m](int x) { return x == v ? m : a[x]; };
  // Usage after the move, touching only the source and destination rows.
  const auto usage_of = [&](int machine, int r) {
    Amount value = u.at(machine, r);
    if (from == m) return value;
    const Amount d = vm.demand[static_cast<std::size_t>(r)];
    const bool transient = inst.resources[static_cast<std::size_t>(r)].transient;
    if (machine == from && (!transient || from != vm.initial_machine)) value -= d;
    if (machine == m && (!transient || m != vm.initial_machine)) value += d;
    return value;
  };

  std::vector<Violation> out;
  capacity_on(inst, usage_of, from, out);
  if (m != from) capacity_on(inst, usage_of, m, out);

  const int s = inst.vms[static_cast<std::size_t>(v)].service;
  conflict_of(inst, s, target_of, out);
  spread_of(inst, s, target_of, out);
  for (int sj : inst.services[static_cast<std::size_t>(s)].depends_on) dependency_of(inst, s, sj, target_of, out);
  for (int si : inst.services[static_cast<std::size_t>(s)].dependents) dependency_of(inst, si, s, target_of, out);
  return finish(std::move(out));
}

}  // namespace vmr
