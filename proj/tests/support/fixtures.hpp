#pragma once

#include <cstdint>
#include <string>

#include "vmr/instance.hpp"

namespace fixtures {

/// The two-machine, three-VM reference instance, built in code.
vmr::Instance tiny1();

/// Directory holding the bundled instance files.
std::string data_dir();

struct RandomShape {
  int max_machines = 4;
  int max_vms = 6;
  int max_resources = 2;
  double dependency_prob = 0.2;
};

/// Random small instance, not necessarily with a feasible initial assignment.
/// Capacities are tight enough that all four constraint families bind.
vmr::Instance random_raw(std::uint64_t seed, const RandomShape& shape = {});

/// Like random_raw, retried with derived seeds until the initial assignment is
/// feasible according to the brute-force oracle.
vmr::Instance random_valid(std::uint64_t seed, const RandomShape& shape = {});

/// Synthetic instance with 4-8 machines and 20-40 VMs.
vmr::Instance random_medium(std::uint64_t seed);

}  // namespace fixtures
