#include "vmr/instance.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <utility>

#include "vmr/feasibility.hpp"

namespace vmr {

SyntaxError::SyntaxError(int line, const std::string& what)
    : InstanceError("line " + std::to_string(line) + ": " + what), line_(line) {}

void Instance::rebuild_members() {
  for (auto& s : services) {
    s.members.clear();
    s.dependents.clear();
  }
  for (const auto& v : vms) {
    if (v.service >= 0 && v.service < num_services()) services[static_cast<std::size_t>(v.service)].members.push_back(v.id);
  }
  for (const auto& s : services) {
    for (int d : s.depends_on) {
      if (d >= 0 && d < num_services() && d != s.id) services[static_cast<std::size_t>(d)].dependents.push_back(s.id);
    }
  }
}

Assignment initial_assignment(const Instance& inst) {
  Assignment a;
  a.target.reserve(inst.vms.size());
  for (const auto& v : inst.vms) a.target.push_back(v.initial_machine);
  return a;
}

std::string format_real(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

namespace {

bool in_range(int i, int n) { return i >= 0 && i < n; }

}  // namespace

std::vector<std::string> validate(const Instance& inst) {
  std::vector<std::string> out;
  const int R = inst.num_resources();
  const int M = inst.num_machines();
  const int S = inst.num_services();

  for (int r = 0; r < R; ++r) {
    if (inst.resources[static_cast<std::size_t>(r)].id != r) out.push_back("resource ids not dense: " + std::to_string(r));
  }
  if (R == 0) out.push_back("no resources");
  if (!in_range(inst.cpu_resource, R)) out.push_back("cpu resource out of range");
  if (inst.n_neighborhoods < 1) out.push_back("no neighbourhoods");
  if (inst.n_locations < 1) out.push_back("no locations");
  if (!(inst.time_budget_s > 0.0)) out.push_back("time budget must be positive");

  for (int m = 0; m < M; ++m) {
    const auto& mc = inst.machines[static_cast<std::size_t>(m)];
    const std::string tag = ": m" + std::to_string(m);
    if (mc.id != m) out.push_back("machine ids not dense" + tag);
    if (!in_range(mc.neighborhood, inst.n_neighborhoods)) out.push_back("neighbourhood out of range" + tag);
    if (!in_range(mc.location, inst.n_locations)) out.push_back("location out of range" + tag);
    if (static_cast<int>(mc.capacity.size()) != R || static_cast<int>(mc.safety_capacity.size()) != R) {
      out.push_back("capacity vector length mismatch" + tag);
      continue;
    }
    for (int r = 0; r < R; ++r) {
      const auto q = mc.capacity[static_cast<std::size_t>(r)];
      const auto sc = mc.safety_capacity[static_cast<std::size_t>(r)];
      if (q < 0 || sc < 0) out.push_back("negative capacity" + tag);
      if (sc > q) out.push_back("safety capacity exceeds capacity" + tag + " r" + std::to_string(r));
    }
    if (mc.elec_idle < 0 || mc.elec_per_cpu < 0 || mc.elec_price < 0) out.push_back("negative electricity constant" + tag);
  }

  std::vector<int> service_size(static_cast<std::size_t>(std::max(S, 0)), 0);
  for (int v = 0; v < inst.num_vms(); ++v) {
    const auto& vm = inst.vms[static_cast<std::size_t>(v)];
    const std::string tag = ": v" + std::to_string(v);
    if (vm.id != v) out.push_back("vm ids not dense" + tag);
    if (!in_range(vm.service, S)) {
      out.push_back("service out of range" + tag);
    } else {
      ++service_size[static_cast<std::size_t>(vm.service)];
    }
    if (!in_range(vm.initial_machine, M)) out.push_back("initial machine out of range" + tag);
    if (static_cast<int>(vm.demand.size()) != R) out.push_back("demand vector length mismatch" + tag);
    if (std::any_of(vm.demand.begin(), vm.demand.end(), [](Amount d) { return d < 0; })) {
      out.push_back("negative demand" + tag);
    }
    if (vm.prep_cost < 0 || vm.deploy_cost < 0 || vm.transfer_size < 0) out.push_back("negative migration cost" + tag);
  }

  for (int s = 0; s < S; ++s) {
    const auto& svc = inst.services[static_cast<std::size_t>(s)];
    const std::string tag = ": s" + std::to_string(s);
    if (svc.id != s) out.push_back("service ids not dense" + tag);
    if (static_cast<int>(svc.members.size()) != service_size[static_cast<std::size_t>(s)]) {
      out.push_back("service membership mismatch" + tag);
    }
    if (svc.spread_min < 0) out.push_back("negative spread" + tag);
    if (svc.spread_min > inst.n_locations) out.push_back("spread exceeds locations" + tag);
    std::set<int> seen;
    for (int d : svc.depends_on) {
      if (d == s) out.push_back("self-dependency" + tag);
      else if (!in_range(d, S)) out.push_back("dependency out of range" + tag);
      if (!seen.insert(d).second) out.push_back("duplicate dependency" + tag);
    }
  }

  if (inst.transfer_cost.size() != static_cast<std::size_t>(M) * static_cast<std::size_t>(M)) {
    out.push_back("transfer matrix size mismatch");
  } else {
    for (int m = 0; m < M; ++m) {
      if (inst.transfer(m, m) != 0.0) out.push_back("nonzero transfer-cost diagonal: m" + std::to_string(m));
    }
    if (std::any_of(inst.transfer_cost.begin(), inst.transfer_cost.end(), [](double c) { return c < 0; })) {
      out.push_back("negative transfer cost");
    }
  }

  // Only meaningful on a structurally sound instance.
  if (out.empty()) {
    const auto report = check(inst, initial_assignment(inst));
    if (!report.feasible) out.push_back("infeasible initial assignment: " + describe(report.violations.front()));
  }
  return out;
}

}  // namespace vmr
