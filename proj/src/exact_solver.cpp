#include "vmr/exact_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "vmr/feasibility.hpp"
#include "vmr/partial_state.hpp"

namespace vmr {

void SolverConfig::validate() const {
  if (!(gap >= 0.0 && gap <= 1.0)) throw std::invalid_argument("gap must lie in [0, 1]");
  if (!(time_limit_s > 0.0)) throw std::invalid_argument("time limit must be positive");
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal_within_gap: return "optimal_within_gap";
    case SolveStatus::time_limit: return "time_limit";
    case SolveStatus::node_limit: return "node_limit";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::skipped: return "skipped";
  }
  return "?";
}

double relative_gap(double incumbent, double bound) {
  return (incumbent - bound) / std::max(std::abs(bound), kGapEpsilon);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Node kept on the local depth-first stack; its ancestors are the first
// `depth` placements of the current state.
struct StackNode {
  int depth;  // index into the branching order
  int machine;
  double bound;
};

// Node kept in the best-bound heap, with its full path of machines.
struct HeapNode {
  double bound;
  std::uint64_t seq;
  std::vector<int> path;
};

struct HeapOrder {
  bool operator()(const HeapNode& a, const HeapNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.path.size() != b.path.size()) return a.path.size() < b.path.size();
    return a.seq > b.seq;
  }
};

std::vector<int> branching_order(const Instance& inst) {
  std::vector<int> order(inst.vms.size());
  std::vector<Amount> key(inst.vms.size());
  for (int v = 0; v < inst.num_vms(); ++v) {
    order[static_cast<std::size_t>(v)] = v;
    const auto& d = inst.vms[static_cast<std::size_t>(v)].demand;
    key[static_cast<std::size_t>(v)] = d.empty() ? 0 : *std::max_element(d.begin(), d.end());
  }
  std::stable_sort(order.begin(), order.end(), [&key](int a, int b) {
    return key[static_cast<std::size_t>(a)] > key[static_cast<std::size_t>(b)];
  });
  return order;
}

// Best-bound search with diving: after each expansion the cheapest child is
// visited next and its siblings wait in a heap ordered by bound. Once the heap
// holds cfg.max_open_nodes entries, siblings go to a depth-first stack
// instead, which keeps memory bounded.
class BranchAndBound {
 public:
  BranchAndBound(const Instance& inst, const WeightVector& w, const SolverConfig& cfg)
      : inst_(inst), w_(w), cfg_(cfg), order_(branching_order(inst)), state_(inst) {}

  SolveReport run() {
    start_ = Clock::now();
    if (cfg_.warm_start_initial) {
      const Assignment initial = initial_assignment(inst_);
      if (is_feasible(inst_, initial)) offer(initial);
    }

    const double root = state_.all_necessary_conditions_hold() ? state_.lower_bound(w_) : kInfinity;
    if (root < kInfinity) {
      if (inst_.num_vms() == 0) {
        offer(Assignment{});
      } else {
        distribute(expand(root));
      }
    }

    SolveStatus status = SolveStatus::optimal_within_gap;
    for (;;) {
      update_bound();
      if (gap_reached() || (!dive_ && stack_.empty() && heap_.empty())) break;
      if (cfg_.node_limit > 0 && nodes_ >= cfg_.node_limit) {
        status = SolveStatus::node_limit;
        break;
      }
      if ((nodes_ & 63) == 0 && seconds_since(start_) >= cfg_.time_limit_s) {
        status = SolveStatus::time_limit;
        break;
      }
      if (!select_next()) continue;
      ++nodes_;
      if (state_.complete()) {
        if (state_.placement_rules_hold()) offer(state_.to_assignment());
        continue;
      }
      distribute(expand(current_bound_));
    }

    const bool exhausted = !dive_ && stack_.empty() && heap_.empty();
    SolveReport report;
    report.nodes_explored = nodes_;
    if (exhausted && incumbent_) bound_ = std::max(bound_, incumbent_->value);
    report.lower_bound = bound_;
    if (incumbent_) {
      report.achieved_gap = std::max(0.0, relative_gap(incumbent_->value, bound_));
      report.status = status;
      report.incumbent = incumbent_;
    } else {
      report.achieved_gap = kInfinity;
      report.status = exhausted ? SolveStatus::infeasible : status;
    }
    if (cfg_.pool_all_feasible) {
      report.pool = pool_.canonical();
    } else if (incumbent_) {
      report.pool.push_back({incumbent_->assignment, incumbent_->objectives});
    }
    report.trace = std::move(trace_);
    report.elapsed_s = seconds_since(start_);
    return report;
  }

 private:
  struct Child {
    double cost;
    int machine;
    double bound;
  };

  bool prunable(double bound) const {
    return incumbent_ && bound >= incumbent_->value - 1e-12 * std::max(1.0, std::abs(incumbent_->value));
  }

  bool gap_reached() const { return incumbent_ && relative_gap(incumbent_->value, bound_) <= cfg_.gap; }

  // Moves the state to the next open node. Returns false when that node was
  // pruned by the incumbent found since it was opened.
  bool select_next() {
    if (dive_) {
      const StackNode node = *dive_;
      dive_.reset();
      if (prunable(node.bound)) return false;
      state_.place(order_[static_cast<std::size_t>(node.depth)], node.machine);
      current_bound_ = node.bound;
      return true;
    }
    if (!stack_.empty()) {
      const StackNode node = stack_.back();
      stack_.pop_back();
      if (prunable(node.bound)) return false;
      unwind(node.depth);
      state_.place(order_[static_cast<std::size_t>(node.depth)], node.machine);
      current_bound_ = node.bound;
      return true;
    }
    HeapNode node = heap_.top();
    heap_.pop();
    if (prunable(node.bound)) return false;
    const auto& target = state_.target();
    std::size_t common = 0;
    while (common < node.path.size() && common < static_cast<std::size_t>(state_.num_assigned()) &&
           target[static_cast<std::size_t>(order_[common])] == node.path[common]) {
      ++common;
    }
    unwind(static_cast<int>(common));
    for (std::size_t d = common; d < node.path.size(); ++d) state_.place(order_[d], node.path[d]);
    current_bound_ = node.bound;
    return true;
  }

  void unwind(int depth) {
    while (state_.num_assigned() > depth) state_.unplace(order_[static_cast<std::size_t>(state_.num_assigned() - 1)]);
  }

  // Feasible, unpruned children of the current state, cheapest first.
  std::vector<Child> expand(double parent_bound) {
    const int depth = state_.num_assigned();
    const int v = order_[static_cast<std::size_t>(depth)];
    std::vector<Child> children;
    for (int m = 0; m < inst_.num_machines(); ++m) {
      if (!state_.can_place(v, m)) continue;
      const double cost = state_.marginal_cost(v, m, w_);
      double bound = kInfinity;
      if (state_.place_checked(v, m)) {
        bound = state_.complete() ? (state_.placement_rules_hold() ? scalarize(state_.committed(), w_) : kInfinity)
                                  : state_.lower_bound(w_);
      }
      state_.unplace(v);
      if (bound == kInfinity) continue;
      bound = std::max(bound, parent_bound);
      if (prunable(bound)) continue;
      children.push_back({cost, m, bound});
    }
    std::sort(children.begin(), children.end(), [](const Child& a, const Child& b) {
      return a.cost != b.cost ? a.cost < b.cost : a.machine < b.machine;
    });
    return children;
  }

  void distribute(const std::vector<Child>& children) {
    if (children.empty()) return;
    const int depth = state_.num_assigned();
    if (heap_.size() >= cfg_.max_open_nodes) {
      for (auto it = children.rbegin(); it != children.rend(); ++it) stack_.push_back({depth, it->machine, it->bound});
      return;
    }
    dive_ = StackNode{depth, children.front().machine, children.front().bound};
    if (children.size() == 1) return;
    std::vector<int> prefix(static_cast<std::size_t>(depth) + 1);
    for (int d = 0; d < depth; ++d) prefix[static_cast<std::size_t>(d)] = state_.target()[static_cast<std::size_t>(order_[static_cast<std::size_t>(d)])];
    for (std::size_t i = 1; i < children.size(); ++i) {
      prefix.back() = children[i].machine;
      heap_.push({children[i].bound, seq_++, prefix});
    }
  }

  void offer(const Assignment& a) {
    const ObjectiveVector o = evaluate(inst_, a);
    const double value = scalarize(o, w_);
    if (cfg_.pool_all_feasible) pool_.insert(a, o);
    // Ties go to the dominating vector so the incumbent is never dominated
    // by a pooled solution.
    if (!incumbent_ || value < incumbent_->value || (value <= incumbent_->value && dominates(o, incumbent_->objectives))) {
      incumbent_ = Incumbent{a, o, value};
      record();
    }
  }

  // Global bound: the smallest bound of any open node, capped by the incumbent.
  void update_bound() {
    double lowest = incumbent_ ? incumbent_->value : kInfinity;
    if (dive_) lowest = std::min(lowest, dive_->bound);
    if (!heap_.empty()) lowest = std::min(lowest, heap_.top().bound);
    for (const auto& n : stack_) lowest = std::min(lowest, n.bound);
    if (lowest == kInfinity) return;
    if (lowest > bound_ || !bound_set_) {
      bound_ = bound_set_ ? std::max(bound_, lowest) : lowest;
      bound_set_ = true;
      record();
    }
  }

  void record() {
    if (cfg_.record_trace) trace_.push_back({nodes_, incumbent_ ? incumbent_->value : kInfinity, bound_set_ ? bound_ : -kInfinity});
  }

  const Instance& inst_;
  WeightVector w_;
  SolverConfig cfg_;
  std::vector<int> order_;
  PartialState state_;
  std::optional<StackNode> dive_;
  std::vector<StackNode> stack_;
  std::priority_queue<HeapNode, std::vector<HeapNode>, HeapOrder> heap_;
  std::uint64_t seq_ = 0;
  double current_bound_ = 0.0;
  std::optional<Incumbent> incumbent_;
  ParetoArchive pool_;
  double bound_ = 0.0;
  bool bound_set_ = false;
  std::uint64_t nodes_ = 0;
  std::vector<TracePoint> trace_;
  Clock::time_point start_;
};

}  // namespace

SolveReport solve_weighted(const Instance& inst, const WeightVector& w, const SolverConfig& cfg) {
  cfg.validate();
  return BranchAndBound(inst, w, cfg).run();
}

MultiVectorResult multi_vector_run(const Instance& inst, int k_vectors, const SolverConfig& cfg, double budget_s,
                                   bool parallel) {
  const auto vectors = weight_vectors(k_vectors);
  const auto start = Clock::now();
  std::vector<VectorRun> runs;
  for (const auto& w : vectors) runs.push_back({w, SolveReport{}});

  auto solve_one = [&](std::size_t i) {
    const double remaining = budget_s - seconds_since(start);
    if (remaining <= 0.0) {
      runs[i].report.status = SolveStatus::skipped;
      return;
    }
    SolverConfig local = cfg;
    local.time_limit_s = std::min(cfg.time_limit_s, remaining);
    runs[i].report = solve_weighted(inst, runs[i].weights, local);
  };

  if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < runs.size(); ++i) solve_one(i);
  } else {
    for (std::size_t i = 0; i < runs.size(); ++i) solve_one(i);
  }

  MultiVectorResult result;
  for (const auto& run : runs) {
    for (const auto& e : run.report.pool) result.archive.insert(e);
  }
  result.runs = std::move(runs);
  return result;
}

}  // namespace vmr
