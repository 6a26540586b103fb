#include <algorithm>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "vmr/exact_solver.hpp"

// CPLEX LP text for the weighted model. Variable families:
//   x_v_m   VM v placed on machine m
//   y_s_n   service s present in neighbourhood n
//   z_s_l   service s present in location l
//   o_m     machine m switched on
//   mig_v   VM v moved
//   R_m_r   usage of r on m above safety capacity (continuous)
//   k_one   fixed to 1; carries the objective constant when the CPU resource is transient

namespace vmr {

namespace {

std::string name(const char* prefix, int a) { return std::string(prefix) + "_" + std::to_string(a); }
std::string name(const char* prefix, int a, int b) { return name(prefix, a) + "_" + std::to_string(b); }

// Linear expression with terms kept in insertion order; duplicate variables merge.
class Expr {
 public:
  void add(const std::string& var, double coef) {
    auto [it, fresh] = index_.try_emplace(var, terms_.size());
    if (fresh) {
      terms_.emplace_back(var, coef);
    } else {
      terms_[it->second].second += coef;
    }
  }

  void write(std::ostream& out) const {
    if (terms_.empty()) {
      out << " 0 k_zero";
      return;
    }
    bool first = true;
    for (const auto& [var, coef] : terms_) {
      if (coef < 0) {
        out << " - " << format_real(-coef) << ' ' << var;
      } else {
        out << (first ? " " : " + ") << format_real(coef) << ' ' << var;
      }
      first = false;
    }
  }

 private:
  std::vector<std::pair<std::string, double>> terms_;
  std::map<std::string, std::size_t> index_;
};

class LpWriter {
 public:
  explicit LpWriter(std::ostream& out) : out_(out) {}

  void row(const std::string& comment, const std::string& label, const Expr& e, const char* sense, double rhs) {
    out_ << "\\ " << comment << '\n' << ' ' << label << ':';
    e.write(out_);
    out_ << ' ' << sense << ' ' << format_real(rhs) << '\n';
  }

 private:
  std::ostream& out_;
};

}  // namespace

void export_lp(std::ostream& out, const Instance& inst, const WeightVector& w) {
  const int M = inst.num_machines();
  const int V = inst.num_vms();
  const int S = inst.num_services();
  const int R = inst.num_resources();
  const int N = inst.n_neighborhoods;
  const int L = inst.n_locations;
  const int cpu = inst.cpu_resource;
  auto transient = [&](int r) { return inst.resources[static_cast<std::size_t>(r)].transient; };

  // Demand of VMs on their initial host is held regardless of the placement
  // for transient resources; it becomes a constant.
  std::vector<Amount> base(static_cast<std::size_t>(M) * static_cast<std::size_t>(R), 0);
  auto base_at = [&](int m, int r) -> Amount& { return base[static_cast<std::size_t>(m * R + r)]; };
  for (const auto& vm : inst.vms) {
    for (int r = 0; r < R; ++r) {
      if (transient(r)) base_at(vm.initial_machine, r) += vm.demand[static_cast<std::size_t>(r)];
    }
  }
  // Variable part of U[m, r].
  auto usage_terms = [&](Expr& e, int m, int r, double scale) {
    for (const auto& vm : inst.vms) {
      if (transient(r) && vm.initial_machine == m) continue;
      e.add(name("x", vm.id, m), scale * static_cast<double>(vm.demand[static_cast<std::size_t>(r)]));
    }
  };

  out << "\\ vmr weighted reassignment model\n";
  out << "\\ weights: reliability " << format_real(w.reliability()) << " electricity " << format_real(w.electricity())
      << " migration " << format_real(w.migration()) << '\n';

  Expr objective;
  double constant = 0.0;
  for (int m = 0; m < M; ++m) {
    for (int r = 0; r < R; ++r) objective.add(name("R", m, r), w.reliability());
  }
  for (int m = 0; m < M; ++m) {
    const auto& mc = inst.machines[static_cast<std::size_t>(m)];
    objective.add(name("o", m), w.electricity() * mc.elec_price * mc.elec_idle);
    usage_terms(objective, m, cpu, w.electricity() * mc.elec_price * mc.elec_per_cpu);
    constant += w.electricity() * mc.elec_price * mc.elec_per_cpu * static_cast<double>(base_at(m, cpu));
  }
  for (const auto& vm : inst.vms) {
    objective.add(name("mig", vm.id), w.migration() * (vm.prep_cost + vm.deploy_cost));
    for (int m = 0; m < M; ++m) {
      if (m == vm.initial_machine) continue;
      objective.add(name("x", vm.id, m), w.migration() * vm.transfer_size * inst.transfer(vm.initial_machine, m));
    }
  }
  const bool need_one = constant != 0.0;
  if (need_one) objective.add("k_one", constant);

  out << "Minimize\n obj:";
  objective.write(out);
  out << "\nSubject To\n";
  LpWriter lp(out);

  for (int v = 0; v < V; ++v) {
    Expr e;
    for (int m = 0; m < M; ++m) e.add(name("x", v, m), 1.0);
    lp.row("Eq.(1) assignment v=" + std::to_string(v), name("assign", v), e, "=", 1.0);
  }

  for (int m = 0; m < M; ++m) {
    for (int r = 0; r < R; ++r) {
      Expr e;
      usage_terms(e, m, r, 1.0);
      const double rhs = static_cast<double>(inst.machines[static_cast<std::size_t>(m)].capacity[static_cast<std::size_t>(r)] -
                                             base_at(m, r));
      lp.row("Eq.(4) capacity m=" + std::to_string(m) + " r=" + std::to_string(r), name("cap", m, r), e, "<=", rhs);
    }
  }

  for (int s = 0; s < S; ++s) {
    for (int m = 0; m < M; ++m) {
      Expr e;
      for (int v : inst.services[static_cast<std::size_t>(s)].members) e.add(name("x", v, m), 1.0);
      lp.row("Eq.(5) conflict s=" + std::to_string(s) + " m=" + std::to_string(m), name("conflict", s, m), e, "<=", 1.0);
    }
  }

  // Indicator linking: occupancy > 0 forces the indicator on, and the
  // indicator needs at least one member present.
  auto link = [&](const char* eq_on, const char* eq_off, const char* what, const char* ind, int s, int region,
                  auto in_region) {
    const auto& members = inst.services[static_cast<std::size_t>(s)].members;
    const double big_m = static_cast<double>(std::max<std::size_t>(static_cast<std::size_t>(N) * static_cast<std::size_t>(S),
                                                                   members.size()));
    Expr occupancy;
    for (int v : members) {
      for (int m = 0; m < M; ++m) {
        if (in_region(m)) occupancy.add(name("x", v, m), 1.0);
      }
    }
    const std::string tag = std::string(what) + " s=" + std::to_string(s) + " " + what[0] + "=" + std::to_string(region);
    Expr on = occupancy;
    on.add(name(ind, s, region), -big_m);
    lp.row(std::string(eq_on) + " " + tag, name(ind, s, region) + "_on", on, "<=", 0.0);
    Expr off = occupancy;
    off.add(name(ind, s, region), -1.0);
    lp.row(std::string(eq_off) + " " + tag, name(ind, s, region) + "_off", off, ">=", 0.0);
  };

  for (int s = 0; s < S; ++s) {
    for (int n = 0; n < N; ++n) {
      link("Eq.(7)", "Eq.(8)", "neighbourhood", "y", s, n,
           [&](int m) { return inst.machines[static_cast<std::size_t>(m)].neighborhood == n; });
    }
  }
  for (int s = 0; s < S; ++s) {
    for (int sj : inst.services[static_cast<std::size_t>(s)].depends_on) {
      for (int n = 0; n < N; ++n) {
        Expr e;
        e.add(name("y", s, n), 1.0);
        e.add(name("y", sj, n), -1.0);
        lp.row("Eq.(9) dependency s=" + std::to_string(s) + " on=" + std::to_string(sj) + " n=" + std::to_string(n),
               "dep_" + std::to_string(s) + "_" + std::to_string(sj) + "_" + std::to_string(n), e, "<=", 0.0);
      }
    }
  }
  for (int s = 0; s < S; ++s) {
    for (int l = 0; l < L; ++l) {
      link("Eq.(10)", "Eq.(11)", "location", "z", s, l,
           [&](int m) { return inst.machines[static_cast<std::size_t>(m)].location == l; });
    }
  }
  for (int s = 0; s < S; ++s) {
    Expr e;
    for (int l = 0; l < L; ++l) e.add(name("z", s, l), 1.0);
    lp.row("Eq.(12) spread s=" + std::to_string(s), name("spread", s), e, ">=",
           static_cast<double>(inst.services[static_cast<std::size_t>(s)].spread_min));
  }

  for (int m = 0; m < M; ++m) {
    for (int r = 0; r < R; ++r) {
      Expr e;
      e.add(name("R", m, r), 1.0);
      usage_terms(e, m, r, -1.0);
      const double rhs = static_cast<double>(base_at(m, r) -
                                             inst.machines[static_cast<std::size_t>(m)].safety_capacity[static_cast<std::size_t>(r)]);
      lp.row("Eq.(13) reliability m=" + std::to_string(m) + " r=" + std::to_string(r), name("rel", m, r), e, ">=", rhs);
    }
  }

  for (int m = 0; m < M; ++m) {
    Expr lower;
    lower.add(name("o", m), 1.0);
    for (int v = 0; v < V; ++v) lower.add(name("x", v, m), -1.0);
    lp.row("Eq.(15) switched on m=" + std::to_string(m), name("on_lo", m), lower, "<=", 0.0);
    Expr upper;
    for (int v = 0; v < V; ++v) upper.add(name("x", v, m), 1.0);
    upper.add(name("o", m), -static_cast<double>(V));
    lp.row("Eq.(15) switched on m=" + std::to_string(m), name("on_hi", m), upper, "<=", 0.0);
  }

  for (const auto& vm : inst.vms) {
    Expr e;
    e.add(name("mig", vm.id), 1.0);
    e.add(name("x", vm.id, vm.initial_machine), 1.0);
    lp.row("Eq.(17) moved v=" + std::to_string(vm.id), name("moved", vm.id), e, "=", 1.0);
  }

  out << "Bounds\n";
  for (int m = 0; m < M; ++m) {
    for (int r = 0; r < R; ++r) out << " " << name("R", m, r) << " >= 0\n";
  }
  if (need_one) out << " k_one = 1\n";

  out << "Binaries\n";
  for (int v = 0; v < V; ++v) {
    for (int m = 0; m < M; ++m) out << ' ' << name("x", v, m) << '\n';
  }
  for (int s = 0; s < S; ++s) {
    for (int n = 0; n < N; ++n) out << ' ' << name("y", s, n) << '\n';
  }
  for (int s = 0; s < S; ++s) {
    for (int l = 0; l < L; ++l) out << ' ' << name("z", s, l) << '\n';
  }
  for (int m = 0; m < M; ++m) out << ' ' << name("o", m) << '\n';
  for (int v = 0; v < V; ++v) out << ' ' << name("mig", v) << '\n';
  out << "End\n";
}

std::string export_lp_string(const Instance& inst, const WeightVector& w) {
  std::ostringstream out;
  export_lp(out, inst, w);
  return out.str();
}

}  // namespace vmr
