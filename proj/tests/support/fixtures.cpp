#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"

namespace fixtures {

vmr::Instance tiny1() {
  vmr::Instance inst;
  inst.resources = {{0, false}};
  inst.n_neighborhoods = 2;
  inst.n_locations = 2;
  inst.machines = {
      {0, 0, 0, {10}, {8}, 10.0, 1.0, 1.0},
      {1, 1, 1, {10}, {8}, 10.0, 1.0, 1.0},
  };
  inst.services = {{0, {}, 1, {}, {}}, {1, {}, 1, {}, {}}};
  inst.vms = {
      {0, 0, {4}, 0, 1.0, 1.0, 1.0},
      {1, 0, {4}, 1, 1.0, 1.0, 1.0},
      {2, 1, {3}, 1, 1.0, 1.0, 1.0},
  };
  inst.transfer_cost = {0.0, 2.0, 2.0, 0.0};
  inst.cpu_resource = 0;
  inst.time_budget_s = 30.0;
  inst.rebuild_members();
  return inst;
}

std::string data_dir() { return VMR_DATA_DIR; }

namespace {

double rounded(double x) { return std::round(x * 1000.0) / 1000.0; }

}  // namespace

vmr::Instance random_raw(std::uint64_t seed, const RandomShape& shape) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto real = [&](double lo, double hi) { return rounded(std::uniform_real_distribution<double>(lo, hi)(rng)); };

  vmr::Instance inst;
  const int M = pick(2, shape.max_machines);
  const int V = pick(2, shape.max_vms);
  const int R = pick(1, shape.max_resources);
  const int S = pick(1, V);
  inst.n_locations = pick(1, std::min(M, 3));
  inst.n_neighborhoods = pick(inst.n_locations, M);

  for (int r = 0; r < R; ++r) inst.resources.push_back({r, pick(0, 2) == 0});
  inst.cpu_resource = pick(0, R - 1);

  for (int m = 0; m < M; ++m) {
    vmr::Machine mc;
    mc.id = m;
    mc.neighborhood = m < inst.n_neighborhoods ? m : pick(0, inst.n_neighborhoods - 1);
    mc.location = mc.neighborhood % inst.n_locations;
    for (int r = 0; r < R; ++r) {
      const vmr::Amount q = pick(4, 14);
      mc.capacity.push_back(q);
      mc.safety_capacity.push_back(pick(0, static_cast<int>(q)));
    }
    mc.elec_idle = real(0.0, 20.0);
    mc.elec_per_cpu = real(0.0, 3.0);
    mc.elec_price = real(0.5, 2.0);
    inst.machines.push_back(mc);
  }

  for (int s = 0; s < S; ++s) inst.services.push_back({s, {}, 0, {}, {}});
  for (int v = 0; v < V; ++v) {
    vmr::Vm vm;
    vm.id = v;
    vm.service = v < S ? v : pick(0, S - 1);
    for (int r = 0; r < R; ++r) vm.demand.push_back(pick(0, 6));
    vm.initial_machine = pick(0, M - 1);
    vm.prep_cost = real(0.0, 3.0);
    vm.deploy_cost = real(0.0, 3.0);
    vm.transfer_size = real(0.5, 2.0);
    inst.vms.push_back(vm);
  }
  inst.rebuild_members();
  for (auto& svc : inst.services) {
    const int size = static_cast<int>(svc.members.size());
    svc.spread_min = pick(0, std::min(size, inst.n_locations));
    for (int other = 0; other < S; ++other) {
      if (other != svc.id && std::bernoulli_distribution(shape.dependency_prob)(rng)) svc.depends_on.push_back(other);
    }
  }

  inst.transfer_cost.assign(static_cast<std::size_t>(M) * static_cast<std::size_t>(M), 0.0);
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      if (i != j) inst.transfer(i, j) = real(0.5, 3.0);
    }
  }
  inst.time_budget_s = 10.0;
  inst.rebuild_members();
  return inst;
}

vmr::Instance random_valid(std::uint64_t seed, const RandomShape& shape) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    auto inst = random_raw(seed * 7919 + attempt, shape);
    if (oracle::feasible(inst, vmr::initial_assignment(inst).target)) return inst;
  }
}

vmr::Instance random_medium(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  vmr::GeneratorParams p;
  p.n_machines = pick(4, 8);
  p.n_vms = pick(20, 40);
  p.n_services = pick(p.n_vms / 3, p.n_vms / 2);
  p.n_resources = 2;
  p.n_locations = pick(1, 2);
  p.n_neighborhoods = pick(p.n_locations, std::min(p.n_machines, 4));
  for (std::uint64_t attempt = 0;; ++attempt) {
    p.seed = seed * 1000 + attempt;
    try {
      return vmr::generate_synthetic(p);
    } catch (const vmr::GenerationError&) {
    }
  }
}

}  // namespace fixtures
