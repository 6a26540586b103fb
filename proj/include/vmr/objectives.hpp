#pragma once

#include <array>
#include <vector>

#include "vmr/feasibility.hpp"
#include "vmr/instance.hpp"

namespace vmr {

inline constexpr int kNumObjectives = 3;

/// (reliability, electricity, migration) costs; all minimised.
struct ObjectiveVector {
  double reliability = 0.0;
  double electricity = 0.0;
  double migration = 0.0;

  double operator[](int i) const { return i == 0 ? reliability : (i == 1 ? electricity : migration); }
  std::array<double, 3> as_array() const { return {reliability, electricity, migration}; }

  auto operator<=>(const ObjectiveVector&) const = default;
};

/// Non-negative weights in (reliability, electricity, migration) order, not all
/// zero. The constructor throws std::invalid_argument otherwise.
class WeightVector {
 public:
  WeightVector(double reliability, double electricity, double migration);

  double reliability() const { return w_[0]; }
  double electricity() const { return w_[1]; }
  double migration() const { return w_[2]; }
  double operator[](int i) const { return w_[static_cast<std::size_t>(i)]; }

  bool operator==(const WeightVector&) const = default;

 private:
  std::array<double, 3> w_;
};

double reliability_cost(const Instance& inst, const UsageTable& u);
double electricity_cost(const Instance& inst, const Assignment& a, const UsageTable& u);
double migration_cost(const Instance& inst, const Assignment& a);

/// Cost of moving `v` from its initial host to `m`; 0 when m is the initial host.
double move_cost(const Instance& inst, int v, int m);

ObjectiveVector evaluate(const Instance& inst, const Assignment& a);
ObjectiveVector evaluate(const Instance& inst, const Assignment& a, const UsageTable& u);

double scalarize(const ObjectiveVector& o, const WeightVector& w);

/// Optional min-max rescaling of objectives before weighting.
struct ObjectiveScaling {
  ObjectiveVector lower;
  ObjectiveVector upper;

  static ObjectiveScaling from_points(const std::vector<ObjectiveVector>& points);
};

double scalarize(const ObjectiveVector& o, const WeightVector& w, const ObjectiveScaling& scaling);

/// The seven maximally spread directions, first k of them (1 <= k <= 7).
std::vector<WeightVector> spread_vectors(int k);

/// spread_vectors(min(k, 7)) followed, for k > 7, by points of a uniform
/// simplex lattice that are not parallel to a vector already listed.
std::vector<WeightVector> weight_vectors(int k);

}  // namespace vmr
