#pragma once

#include <limits>
#include <vector>

#include "vmr/feasibility.hpp"
#include "vmr/instance.hpp"
#include "vmr/objectives.hpp"

namespace vmr {

inline constexpr int kUnassigned = -1;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Incrementally maintained partial assignment used by constructive search
/// (branch-and-bound and greedy seeding).
///
/// Usage of transient resources starts with every VM's demand on its initial
/// host, since that demand is held whether or not the VM eventually moves. The
/// state tracks hosting counts, per-service conflict occupancy and
/// neighbourhood/location occupancy so that placements can be tested and
/// costed in O(R) plus the dependency edges of the VM's service.
class PartialState {
 public:
  explicit PartialState(const Instance& inst);

  const Instance& instance() const { return *inst_; }
  const std::vector<int>& target() const { return target_; }
  int num_assigned() const { return assigned_; }
  bool complete() const { return assigned_ == inst_->num_vms(); }
  const UsageTable& usage() const { return usage_; }

  /// Capacity and conflict are respected after placing v on m, and the
  /// spread/dependency necessary conditions still hold.
  bool can_place(int v, int m) const;

  /// Scalarized cost increase of placing v on m given the current state.
  double marginal_cost(int v, int m, const WeightVector& w) const;

  void place(int v, int m);
  void unplace(int v);

  /// place() followed by the spread/dependency necessary conditions of v's
  /// service. The VM stays placed either way.
  bool place_checked(int v, int m);

  /// Capacity of the current usage plus the spread/dependency necessary
  /// conditions of every service.
  bool all_necessary_conditions_hold() const;

  /// Exact cost of the committed part: reliability and electricity of the
  /// current usage plus migration of assigned VMs.
  ObjectiveVector committed() const;

  /// Admissible bound on scalarize(evaluate(.)) over all feasible completions;
  /// +infinity when no feasible completion can exist.
  double lower_bound(const WeightVector& w) const;

  /// Spread and dependency constraints evaluated on the current occupancy.
  /// Only meaningful once complete().
  bool placement_rules_hold() const;

  Assignment to_assignment() const;

 private:
  bool necessary_conditions_hold(int service) const;
  // Sum of each unassigned VM's cheapest placement; also returns the sum of
  // their cheapest migrations.
  double per_vm_bound(const WeightVector& w, double& migration_floor) const;
  // Capacity-aware bound on the whole remaining cost (fluid relaxation).
  double aggregate_bound(const WeightVector& w, double migration_floor) const;
  int missing_neighborhoods(int dependent, int provider) const;
  Amount delta(int v, int m, int r) const;

  const Instance* inst_;
  std::vector<int> target_;
  int assigned_ = 0;
  UsageTable usage_;
  std::vector<int> hosted_;               // per machine
  std::vector<int> service_on_machine_;   // |S| x |M| counts
  std::vector<int> service_in_neigh_;     // |S| x |N| counts
  std::vector<int> service_in_loc_;       // |S| x |L| counts
  std::vector<int> distinct_locations_;   // per service
  std::vector<int> unassigned_in_service_;
  std::vector<Amount> min_demand_;         // per resource, over all VMs
  std::vector<Amount> remaining_demand_;   // per resource, over unassigned VMs
  int services_pending_ = 0;               // services with unassigned members
  double migration_ = 0.0;
};

/// Bound for an arbitrary partial assignment (entries kUnassigned are free).
double lower_bound(const Instance& inst, const WeightVector& w, const std::vector<int>& partial);

}  // namespace vmr
