#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vmr {

using Amount = std::int64_t;

struct Resource {
  int id = 0;
  // Consumed on both the source and the destination machine while a VM migrates.
  bool transient = false;

  bool operator==(const Resource&) const = default;
};

struct Machine {
  int id = 0;
  int neighborhood = 0;
  int location = 0;
  std::vector<Amount> capacity;         // Q[m, r]
  std::vector<Amount> safety_capacity;  // SC[m, r]
  double elec_idle = 0.0;               // energy per unit time when switched on
  double elec_per_cpu = 0.0;            // energy per CPU unit
  double elec_price = 0.0;              // price per energy unit

  bool operator==(const Machine&) const = default;
};

struct Vm {
  int id = 0;
  int service = 0;
  std::vector<Amount> demand;
  int initial_machine = 0;
  double prep_cost = 0.0;
  double deploy_cost = 0.0;
  // Multiplies the machine-pair transfer cost factor when the VM moves.
  double transfer_size = 0.0;

  bool operator==(const Vm&) const = default;
};

struct Service {
  int id = 0;
  std::vector<int> members;  // derived from Vm::service, ascending
  int spread_min = 0;
  std::vector<int> depends_on;
  std::vector<int> dependents;  // derived: services that depend on this one

  bool operator==(const Service&) const = default;
};

/// A data centre snapshot: machines, the VMs they currently host and the
/// placement rules. Immutable once built; every query is a pure read.
struct Instance {
  std::vector<Resource> resources;
  std::vector<Machine> machines;
  std::vector<Vm> vms;
  std::vector<Service> services;
  int n_neighborhoods = 0;
  int n_locations = 0;
  // Row-major |M| x |M| matrix.
  std::vector<double> transfer_cost;
  int cpu_resource = 0;
  double time_budget_s = 1.0;

  int num_machines() const { return static_cast<int>(machines.size()); }
  int num_vms() const { return static_cast<int>(vms.size()); }
  int num_services() const { return static_cast<int>(services.size()); }
  int num_resources() const { return static_cast<int>(resources.size()); }

  double transfer(int from, int to) const {
    return transfer_cost[static_cast<std::size_t>(from) * machines.size() + static_cast<std::size_t>(to)];
  }
  double& transfer(int from, int to) {
    return transfer_cost[static_cast<std::size_t>(from) * machines.size() + static_cast<std::size_t>(to)];
  }

  /// Rebuilds the derived Service::members and Service::dependents lists.
  void rebuild_members();

  bool operator==(const Instance&) const = default;
};

/// Total mapping VM -> machine.
struct Assignment {
  std::vector<int> target;

  int operator[](int v) const { return target[static_cast<std::size_t>(v)]; }
  int& operator[](int v) { return target[static_cast<std::size_t>(v)]; }
  int size() const { return static_cast<int>(target.size()); }

  auto operator<=>(const Assignment&) const = default;
};

Assignment initial_assignment(const Instance& inst);

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public InstanceError {
 public:
  SyntaxError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

class SemanticError : public InstanceError {
 public:
  using InstanceError::InstanceError;
};

class InfeasibleInitialError : public InstanceError {
 public:
  using InstanceError::InstanceError;
};

class GenerationError : public InstanceError {
 public:
  using InstanceError::InstanceError;
};

/// Every invariant violation of `inst`, including infeasibility of the initial
/// assignment. Empty means valid.
std::vector<std::string> validate(const Instance& inst);

Instance parse_instance(std::istream& in);
Instance parse_instance_string(std::string_view text);
Instance load_instance(const std::string& path);

void write_instance(std::ostream& out, const Instance& inst);
std::string write_instance_string(const Instance& inst);

struct GeneratorParams {
  int n_machines = 4;
  int n_vms = 20;
  int n_services = 8;
  int n_resources = 2;
  int n_locations = 2;
  int n_neighborhoods = 2;
  std::uint64_t seed = 1;
  double time_budget_s = 30.0;
};

/// Deterministic synthetic data centre whose initial placement is feasible by
/// construction. Throws GenerationError when first-fit packing fails.
Instance generate_synthetic(const GeneratorParams& params);

/// Shortest decimal text that parses back to the same double.
std::string format_real(double value);

}  // namespace vmr
