// Serial reference vs OpenMP for the two data-parallel kernels.
//
//   ./bench_kernels --benchmark_filter=Scan
//
// The thread count follows OMP_NUM_THREADS.

#include <map>
#include <random>

#include <benchmark/benchmark.h>

#include "vmr/instance.hpp"
#include "vmr/kernels.hpp"

namespace {

const vmr::Instance& instance_for(int n_vms) {
  static std::map<int, vmr::Instance> cache;
  auto it = cache.find(n_vms);
  if (it == cache.end()) {
    vmr::GeneratorParams p;
    p.n_machines = 8;
    p.n_vms = n_vms;
    p.n_services = n_vms / 2;
    p.n_resources = 2;
    p.n_locations = 2;
    p.n_neighborhoods = 4;
    p.seed = 11;
    it = cache.emplace(n_vms, vmr::generate_synthetic(p)).first;
  }
  return it->second;
}

std::vector<vmr::Assignment> random_batch(const vmr::Instance& inst, std::size_t n) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> machine(0, inst.num_machines() - 1);
  std::bernoulli_distribution flip(0.1);
  std::vector<vmr::Assignment> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto a = vmr::initial_assignment(inst);
    for (auto& m : a.target) {
      if (flip(rng)) m = machine(rng);
    }
    out.push_back(std::move(a));
  }
  return out;
}

void BM_ScanSerial(benchmark::State& state) {
  const auto& inst = instance_for(static_cast<int>(state.range(0)));
  const auto a = vmr::initial_assignment(inst);
  for (auto _ : state) benchmark::DoNotOptimize(vmr::scan_neighbourhood_serial(inst, a));
}

void BM_ScanParallel(benchmark::State& state) {
  const auto& inst = instance_for(static_cast<int>(state.range(0)));
  const auto a = vmr::initial_assignment(inst);
  for (auto _ : state) benchmark::DoNotOptimize(vmr::scan_neighbourhood(inst, a));
  state.counters["threads"] = vmr::kernel_threads();
}

void BM_BatchSerial(benchmark::State& state) {
  const auto& inst = instance_for(static_cast<int>(state.range(0)));
  const auto batch = random_batch(inst, 20);
  for (auto _ : state) benchmark::DoNotOptimize(vmr::evaluate_batch_serial(inst, batch, 2));
}

void BM_BatchParallel(benchmark::State& state) {
  const auto& inst = instance_for(static_cast<int>(state.range(0)));
  const auto batch = random_batch(inst, 20);
  for (auto _ : state) benchmark::DoNotOptimize(vmr::evaluate_batch(inst, batch, 2));
  state.counters["threads"] = vmr::kernel_threads();
}

}  // namespace

BENCHMARK(BM_ScanSerial)->Arg(40)->Arg(200);
BENCHMARK(BM_ScanParallel)->Arg(40)->Arg(200);
BENCHMARK(BM_BatchSerial)->Arg(40)->Arg(200);
BENCHMARK(BM_BatchParallel)->Arg(40)->Arg(200);

BENCHMARK_MAIN();
