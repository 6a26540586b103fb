#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "vmr/feasibility.hpp"
#include "vmr/instance.hpp"

namespace vmr {

namespace {

// Explicit transforms of raw 64-bit draws keep instances identical across
// standard library implementations.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  int integer(int lo, int hi) {  // inclusive
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(rng_() % span);
  }
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 rng_;
};

// Rounded to 1/1000 so values print compactly.
double rounded(double x) { return std::round(x * 1000.0) / 1000.0; }

}  // namespace

Instance generate_synthetic(const GeneratorParams& p) {
  if (p.n_services < 1 || p.n_vms < p.n_services) throw GenerationError("need n_vms >= n_services >= 1");
  if (p.n_locations < 1 || p.n_machines < p.n_locations) throw GenerationError("need n_machines >= n_locations >= 1");
  if (p.n_neighborhoods < 1 || p.n_machines < p.n_neighborhoods) {
    throw GenerationError("need n_machines >= n_neighborhoods >= 1");
  }
  if (p.n_resources < 1) throw GenerationError("need at least one resource");

  Draw draw(p.seed);
  Instance inst;
  const int R = p.n_resources;
  const int M = p.n_machines;
  const int V = p.n_vms;
  const int S = p.n_services;

  inst.cpu_resource = 0;
  for (int r = 0; r < R; ++r) inst.resources.push_back({r, r != 0 && draw.chance(0.5)});
  inst.n_neighborhoods = p.n_neighborhoods;
  inst.n_locations = p.n_locations;
  inst.time_budget_s = p.time_budget_s;

  // Services: the first S VMs seed one service each; the rest join random
  // services that still have room under the one-VM-per-machine conflict rule.
  std::vector<int> service_of(static_cast<std::size_t>(V));
  std::vector<int> size(static_cast<std::size_t>(S), 0);
  for (int v = 0; v < V; ++v) {
    int s = v;
    if (v >= S) {
      s = draw.integer(0, S - 1);
      for (int tries = 0; tries < S && size[static_cast<std::size_t>(s)] >= M; ++tries) s = (s + 1) % S;
      if (size[static_cast<std::size_t>(s)] >= M) throw GenerationError("services cannot absorb all VMs without conflicts");
    }
    service_of[static_cast<std::size_t>(v)] = s;
    ++size[static_cast<std::size_t>(s)];
  }

  std::vector<std::vector<Amount>> demand(static_cast<std::size_t>(V), std::vector<Amount>(static_cast<std::size_t>(R)));
  std::vector<Amount> total(static_cast<std::size_t>(R), 0);
  std::vector<Amount> largest(static_cast<std::size_t>(R), 0);
  for (int v = 0; v < V; ++v) {
    for (int r = 0; r < R; ++r) {
      const Amount d = draw.integer(1, 10);
      demand[static_cast<std::size_t>(v)][static_cast<std::size_t>(r)] = d;
      total[static_cast<std::size_t>(r)] += d;
      largest[static_cast<std::size_t>(r)] = std::max(largest[static_cast<std::size_t>(r)], d);
    }
  }

  for (int m = 0; m < M; ++m) {
    Machine mc;
    mc.id = m;
    mc.neighborhood = static_cast<int>(static_cast<long long>(m) * p.n_neighborhoods / M);
    mc.location = m % p.n_locations;
    for (int r = 0; r < R; ++r) {
      const double share = static_cast<double>(total[static_cast<std::size_t>(r)]) / M;
      const Amount q = static_cast<Amount>(std::ceil(share * draw.uniform(1.3, 1.8))) + largest[static_cast<std::size_t>(r)];
      mc.capacity.push_back(q);
      mc.safety_capacity.push_back(static_cast<Amount>(std::floor(static_cast<double>(q) * draw.uniform(0.6, 0.9))));
    }
    mc.elec_idle = rounded(draw.uniform(50.0, 200.0));
    mc.elec_per_cpu = rounded(draw.uniform(1.0, 10.0));
    inst.machines.push_back(std::move(mc));
  }
  std::vector<double> price(static_cast<std::size_t>(p.n_locations));
  for (auto& g : price) g = rounded(draw.uniform(0.5, 2.0));
  for (auto& mc : inst.machines) mc.elec_price = price[static_cast<std::size_t>(mc.location)];

  // First-fit from a random starting machine; the initial placement carries
  // no migrations, so transient usage equals plain usage here.
  std::vector<Amount> used(static_cast<std::size_t>(M) * static_cast<std::size_t>(R), 0);
  std::vector<std::set<int>> services_on(static_cast<std::size_t>(M));
  std::vector<int> initial(static_cast<std::size_t>(V), -1);
  for (int v = 0; v < V; ++v) {
    const int start = draw.integer(0, M - 1);
    for (int k = 0; k < M && initial[static_cast<std::size_t>(v)] < 0; ++k) {
      const int m = (start + k) % M;
      if (services_on[static_cast<std::size_t>(m)].count(service_of[static_cast<std::size_t>(v)])) continue;
      bool fits = true;
      for (int r = 0; r < R && fits; ++r) {
        fits = used[static_cast<std::size_t>(m * R + r)] + demand[static_cast<std::size_t>(v)][static_cast<std::size_t>(r)] <=
               inst.machines[static_cast<std::size_t>(m)].capacity[static_cast<std::size_t>(r)];
      }
      if (!fits) continue;
      initial[static_cast<std::size_t>(v)] = m;
      services_on[static_cast<std::size_t>(m)].insert(service_of[static_cast<std::size_t>(v)]);
      for (int r = 0; r < R; ++r) used[static_cast<std::size_t>(m * R + r)] += demand[static_cast<std::size_t>(v)][static_cast<std::size_t>(r)];
    }
    if (initial[static_cast<std::size_t>(v)] < 0) throw GenerationError("first-fit packing failed; raise capacities");
  }

  for (int v = 0; v < V; ++v) {
    Vm vm;
    vm.id = v;
    vm.service = service_of[static_cast<std::size_t>(v)];
    vm.demand = demand[static_cast<std::size_t>(v)];
    vm.initial_machine = initial[static_cast<std::size_t>(v)];
    vm.prep_cost = rounded(draw.uniform(1.0, 5.0));
    vm.deploy_cost = rounded(draw.uniform(1.0, 5.0));
    vm.transfer_size = rounded(draw.uniform(1.0, 3.0));
    inst.vms.push_back(std::move(vm));
  }

  // Spread requirements and dependencies that the initial placement satisfies.
  std::vector<std::set<int>> locs(static_cast<std::size_t>(S)), neighs(static_cast<std::size_t>(S));
  for (const auto& vm : inst.vms) {
    const auto& mc = inst.machines[static_cast<std::size_t>(vm.initial_machine)];
    locs[static_cast<std::size_t>(vm.service)].insert(mc.location);
    neighs[static_cast<std::size_t>(vm.service)].insert(mc.neighborhood);
  }
  for (int s = 0; s < S; ++s) {
    Service svc;
    svc.id = s;
    svc.spread_min = draw.integer(1, static_cast<int>(locs[static_cast<std::size_t>(s)].size()));
    if (S > 1 && draw.chance(0.3)) {
      int other = draw.integer(0, S - 2);
      if (other >= s) ++other;
      const auto& mine = neighs[static_cast<std::size_t>(s)];
      const auto& theirs = neighs[static_cast<std::size_t>(other)];
      if (std::includes(theirs.begin(), theirs.end(), mine.begin(), mine.end())) svc.depends_on.push_back(other);
    }
    inst.services.push_back(std::move(svc));
  }

  inst.transfer_cost.assign(static_cast<std::size_t>(M) * static_cast<std::size_t>(M), 0.0);
  for (int i = 0; i < M; ++i) {
    for (int j = i + 1; j < M; ++j) {
      const auto& a = inst.machines[static_cast<std::size_t>(i)];
      const auto& b = inst.machines[static_cast<std::size_t>(j)];
      const double base = a.neighborhood == b.neighborhood ? 1.0 : (a.location == b.location ? 2.0 : 4.0);
      const double c = rounded(base * draw.uniform(0.75, 1.25));
      inst.transfer(i, j) = c;
      inst.transfer(j, i) = c;
    }
  }

  inst.rebuild_members();
  return inst;
}

}  // namespace vmr
