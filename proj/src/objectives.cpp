#include "vmr/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vmr {

WeightVector::WeightVector(double reliability, double electricity, double migration)
    : w_{reliability, electricity, migration} {
  for (double x : w_) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("weights must be finite and non-negative");
  }
  if (w_[0] == 0.0 && w_[1] == 0.0 && w_[2] == 0.0) throw std::invalid_argument("weight vector is all zero");
}

double reliability_cost(const Instance& inst, const UsageTable& u) {
  double total = 0.0;
  for (int m = 0; m < inst.num_machines(); ++m) {
    const auto& sc = inst.machines[static_cast<std::size_t>(m)].safety_capacity;
    for (int r = 0; r < inst.num_resources(); ++r) {
      total += static_cast<double>(std::max<Amount>(0, u.at(m, r) - sc[static_cast<std::size_t>(r)]));
    }
  }
  return total;
}

double electricity_cost(const Instance& inst, const Assignment& a, const UsageTable& u) {
  std::vector<char> on(inst.machines.size(), 0);
  for (int m : a.target) on[static_cast<std::size_t>(m)] = 1;
  double total = 0.0;
  for (int m = 0; m < inst.num_machines(); ++m) {
    const auto& mc = inst.machines[static_cast<std::size_t>(m)];
    const double idle = on[static_cast<std::size_t>(m)] ? mc.elec_idle : 0.0;
    total += mc.elec_price * (idle + mc.elec_per_cpu * static_cast<double>(u.at(m, inst.cpu_resource)));
  }
  return total;
}

double move_cost(const Instance& inst, int v, int m) {
  const auto& vm = inst.vms[static_cast<std::size_t>(v)];
  if (m == vm.initial_machine) return 0.0;
  return vm.prep_cost + vm.deploy_cost + vm.transfer_size * inst.transfer(vm.initial_machine, m);
}

double migration_cost(const Instance& inst, const Assignment& a) {
  double total = 0.0;
  for (int v = 0; v < inst.num_vms(); ++v) total += move_cost(inst, v, a[v]);
  return total;
}

ObjectiveVector evaluate(const Instance& inst, const Assignment& a, const UsageTable& u) {
  return {reliability_cost(inst, u), electricity_cost(inst, a, u), migration_cost(inst, a)};
}

ObjectiveVector evaluate(const Instance& inst, const Assignment& a) { return evaluate(inst, a, compute_usage(inst, a)); }

double scalarize(const ObjectiveVector& o, const WeightVector& w) {
  return w.reliability() * o.reliability + w.electricity() * o.electricity + w.migration() * o.migration;
}

ObjectiveScaling ObjectiveScaling::from_points(const std::vector<ObjectiveVector>& points) {
  if (points.empty()) throw std::invalid_argument("scaling needs at least one point");
  ObjectiveScaling s{points.front(), points.front()};
  for (const auto& p : points) {
    s.lower = {std::min(s.lower.reliability, p.reliability), std::min(s.lower.electricity, p.electricity),
               std::min(s.lower.migration, p.migration)};
    s.upper = {std::max(s.upper.reliability, p.reliability), std::max(s.upper.electricity, p.electricity),
               std::max(s.upper.migration, p.migration)};
  }
  return s;
}

double scalarize(const ObjectiveVector& o, const WeightVector& w, const ObjectiveScaling& scaling) {
  double total = 0.0;
  for (int i = 0; i < kNumObjectives; ++i) {
    const double range = scaling.upper[i] - scaling.lower[i];
    const double x = range > 0.0 ? (o[i] - scaling.lower[i]) / range : 0.0;
    total += w[i] * x;
  }
  return total;
}

std::vector<WeightVector> spread_vectors(int k) {
  if (k < 1 || k > 7) throw std::out_of_range("spread_vectors: k must be in 1..7");
  static const std::vector<WeightVector> kSpread = {
      {1.0, 1.0, 1.0},   {0.6, 0.3, 0.1},   {0.3, 0.1, 0.6},   {0.1, 0.6, 0.3},
      {0.45, 0.45, 0.1}, {0.45, 0.1, 0.45}, {0.1, 0.45, 0.45},
  };
  return {kSpread.begin(), kSpread.begin() + k};
}

namespace {

bool parallel(const WeightVector& a, const WeightVector& b) {
  // a x b == 0 with a tolerance scaled to the magnitudes involved.
  const double cx = a[1] * b[2] - a[2] * b[1];
  const double cy = a[2] * b[0] - a[0] * b[2];
  const double cz = a[0] * b[1] - a[1] * b[0];
  return std::abs(cx) + std::abs(cy) + std::abs(cz) < 1e-12;
}

}  // namespace

std::vector<WeightVector> weight_vectors(int k) {
  if (k < 1) throw std::out_of_range("weight_vectors: k must be positive");
  auto out = spread_vectors(std::min(k, 7));
  // Das-Dennis lattice with H divisions, H grown until enough directions exist.
  for (int h = 1; static_cast<int>(out.size()) < k; ++h) {
    for (int i = h; i >= 0 && static_cast<int>(out.size()) < k; --i) {
      for (int j = h - i; j >= 0 && static_cast<int>(out.size()) < k; --j) {
        const WeightVector w(static_cast<double>(i) / h, static_cast<double>(j) / h, static_cast<double>(h - i - j) / h);
        if (std::none_of(out.begin(), out.end(), [&](const WeightVector& x) { return parallel(x, w); })) out.push_back(w);
      }
    }
  }
  return out;
}

}  // namespace vmr
