#pragma once

#include <string>
#include <vector>

#include "vmr/instance.hpp"

namespace vmr {

/// Per-machine, per-resource utilisation U[m, r].
///
/// Non-transient resources count the demand of every VM hosted on m. Transient
/// resources additionally keep the demand of VMs whose initial host is m, even
/// after they moved away.
class UsageTable {
 public:
  UsageTable() = default;
  UsageTable(int n_machines, int n_resources)
      : n_resources_(n_resources),
        usage_(static_cast<std::size_t>(n_machines) * static_cast<std::size_t>(n_resources), 0) {}

  Amount at(int m, int r) const { return usage_[index(m, r)]; }
  Amount& at(int m, int r) { return usage_[index(m, r)]; }
  int num_resources() const { return n_resources_; }

  bool operator==(const UsageTable&) const = default;

 private:
  std::size_t index(int m, int r) const {
    return static_cast<std::size_t>(m) * static_cast<std::size_t>(n_resources_) + static_cast<std::size_t>(r);
  }

  int n_resources_ = 0;
  std::vector<Amount> usage_;
};

UsageTable compute_usage(const Instance& inst, const Assignment& a);

/// Applies the usage change of moving `v` from its current machine to `m`.
void apply_move(const Instance& inst, const Assignment& a, UsageTable& u, int v, int m);

enum class ViolationKind { capacity, conflict, dependency, spread };

const char* to_string(ViolationKind kind);

/// Subjects per kind: capacity {m, r}; conflict {s, m}; dependency {s_i, s_j, n};
/// spread {s}. Amount is the capacity excess, the surplus VM count on the
/// machine, 1 per uncovered neighbourhood, or the missing location count.
struct Violation {
  ViolationKind kind = ViolationKind::capacity;
  std::vector<int> subjects;
  Amount amount = 0;

  auto operator<=>(const Violation&) const = default;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;

  Amount total_amount() const;
  bool operator==(const FeasibilityReport&) const = default;
};

std::string describe(const Violation& v);

FeasibilityReport check(const Instance& inst, const Assignment& a);
bool is_feasible(const Instance& inst, const Assignment& a);

/// Incremental check of the move M(v) := m.
///
/// Reports the violations of the mutated assignment that involve the moved VM:
/// capacity on the source and destination machines, conflict and spread of
/// v's service, and dependency edges touching that service. When `a` is
/// feasible this equals `check` on the mutated assignment. `u` must be the
/// usage of `a`; it is not modified.
FeasibilityReport check_move(const Instance& inst, const Assignment& a, const UsageTable& u, int v, int m);

}  // namespace vmr
