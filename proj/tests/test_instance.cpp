#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "vmr/instance.hpp"

namespace {

const char* kTiny1 = R"(# tiny1
RESOURCES 1
0 0
TOPOLOGY 2 2
MACHINES 2
0 0 0 10 8 10 1 1
1 1 1 10 8 10 1 1
SERVICES 2
0 1 0
1 1 0
VMS 3
0 0 4 0 1 1 1
1 0 4 1 1 1 1
2 1 3 1 1 1 1
TRANSFER
0 2
2 0
CPU_RESOURCE 0
TIME_BUDGET 30
)";

std::string replace_line(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

bool mentions(const std::vector<std::string>& problems, const std::string& needle) {
  return std::any_of(problems.begin(), problems.end(), [&](const std::string& p) { return p.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("parse tiny1 text") {
  const auto inst = vmr::parse_instance_string(kTiny1);
  CHECK(inst.num_machines() == 2);
  CHECK(inst.num_vms() == 3);
  CHECK(inst.num_services() == 2);
  CHECK(inst.num_resources() == 1);
  CHECK(inst == fixtures::tiny1());
  CHECK(inst.services[0].members == std::vector<int>{0, 1});
  CHECK(inst.transfer(0, 1) == 2.0);
}

TEST_CASE("bundled tiny1 file matches the in-code fixture") {
  CHECK(vmr::load_instance(fixtures::data_dir() + "/tiny1.vmr") == fixtures::tiny1());
}

TEST_CASE("extra machine record is a syntax error on that line") {
  const std::string text = replace_line(kTiny1, "1 1 1 10 8 10 1 1\n", "1 1 1 10 8 10 1 1\n1 1 1 10 8 10 1 1\n");
  try {
    vmr::parse_instance_string(text);
    FAIL("expected a syntax error");
  } catch (const vmr::SyntaxError& e) {
    CHECK(e.line() == 8);
  }
}

TEST_CASE("syntax errors carry line numbers") {
  SUBCASE("bad keyword") {
    try {
      vmr::parse_instance_string(replace_line(kTiny1, "TOPOLOGY", "TOPOLOGIE"));
      FAIL("expected a syntax error");
    } catch (const vmr::SyntaxError& e) {
      CHECK(e.line() == 4);
    }
  }
  SUBCASE("short record") {
    try {
      vmr::parse_instance_string(replace_line(kTiny1, "2 1 3 1 1 1 1", "2 1 3 1 1 1"));
      FAIL("expected a syntax error");
    } catch (const vmr::SyntaxError& e) {
      CHECK(e.line() == 14);
    }
  }
  SUBCASE("non-numeric token") {
    CHECK_THROWS_AS(vmr::parse_instance_string(replace_line(kTiny1, "0 0 0 10 8", "0 0 0 ten 8")), vmr::SyntaxError);
  }
  SUBCASE("truncated input") {
    CHECK_THROWS_AS(vmr::parse_instance_string("RESOURCES 1\n0 0\n"), vmr::SyntaxError);
  }
}

TEST_CASE("safety capacity above capacity is a semantic error") {
  const std::string text = replace_line(kTiny1, "0 0 0 10 8", "0 0 0 10 11");
  try {
    vmr::parse_instance_string(text);
    FAIL("expected a semantic error");
  } catch (const vmr::SemanticError& e) {
    CHECK(std::string(e.what()).find("safety capacity exceeds capacity") != std::string::npos);
  }
}

TEST_CASE("infeasible initial assignment is rejected with the first violation") {
  // v0 starts on m1 next to v1: two members of s0 on one machine.
  const std::string text = replace_line(kTiny1, "0 0 4 0 1 1 1", "0 0 4 1 1 1 1");
  try {
    vmr::parse_instance_string(text);
    FAIL("expected rejection");
  } catch (const vmr::InfeasibleInitialError& e) {
    CHECK(std::string(e.what()).find("infeasible initial assignment") != std::string::npos);
  }
}

TEST_CASE("validate reports every problem") {
  auto inst = fixtures::tiny1();
  CHECK(vmr::validate(inst).empty());

  SUBCASE("nonzero diagonal") {
    inst.transfer(0, 0) = 1.0;
    const auto p = vmr::validate(inst);
    REQUIRE(p.size() == 1);
    CHECK(mentions(p, "nonzero transfer-cost diagonal"));
  }
  SUBCASE("self dependency") {
    inst.services[0].depends_on = {0};
    inst.rebuild_members();
    CHECK(mentions(vmr::validate(inst), "self-dependency"));
  }
  SUBCASE("several at once") {
    inst.transfer(1, 1) = 3.0;
    inst.machines[0].safety_capacity[0] = 12;
    inst.services[1].spread_min = 5;
    const auto p = vmr::validate(inst);
    CHECK(mentions(p, "nonzero transfer-cost diagonal"));
    CHECK(mentions(p, "safety capacity exceeds capacity"));
    CHECK(mentions(p, "spread exceeds locations"));
  }
}

TEST_CASE("write then parse is the identity") {
  SUBCASE("tiny1") {
    const auto inst = fixtures::tiny1();
    CHECK(vmr::parse_instance_string(vmr::write_instance_string(inst)) == inst);
  }
  SUBCASE("no services, no VMs") {
    auto inst = fixtures::tiny1();
    inst.vms.clear();
    inst.services.clear();
    inst.rebuild_members();
    REQUIRE(vmr::validate(inst).empty());
    CHECK(vmr::parse_instance_string(vmr::write_instance_string(inst)) == inst);
  }
  SUBCASE("generated, seed 7") {
    vmr::GeneratorParams p;
    p.seed = 7;
    const auto inst = vmr::generate_synthetic(p);
    CHECK(vmr::parse_instance_string(vmr::write_instance_string(inst)) == inst);
  }
  SUBCASE("random reals survive exactly") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const auto inst = fixtures::random_valid(seed);
      REQUIRE(vmr::validate(inst).empty());
      CHECK(vmr::parse_instance_string(vmr::write_instance_string(inst)) == inst);
    }
  }
}

TEST_CASE("generator") {
  vmr::GeneratorParams p;  // 4 machines, 20 VMs, 8 services, 2 resources, 2 locations, 2 neighbourhoods
  p.seed = 1;
  const auto a = vmr::generate_synthetic(p);
  CHECK(vmr::validate(a).empty());
  CHECK(oracle::feasible(a, vmr::initial_assignment(a).target));

  SUBCASE("deterministic") { CHECK(vmr::generate_synthetic(p) == a); }
  SUBCASE("seed matters") {
    p.seed = 2;
    CHECK_FALSE(vmr::generate_synthetic(p) == a);
  }
  SUBCASE("electricity ranges") {
    for (const auto& m : a.machines) {
      CHECK(m.elec_idle >= 50.0);
      CHECK(m.elec_idle <= 200.0);
      CHECK(m.elec_per_cpu >= 1.0);
      CHECK(m.elec_per_cpu <= 10.0);
      CHECK(m.elec_price >= 0.5);
      CHECK(m.elec_price <= 2.0);
    }
    // One price per location.
    for (const auto& m : a.machines) {
      for (const auto& n : a.machines) {
        if (m.location == n.location) CHECK(m.elec_price == n.elec_price);
      }
    }
  }
  SUBCASE("a_1_1 shape") {
    vmr::GeneratorParams q;
    q.n_machines = 4;
    q.n_vms = 100;
    q.n_services = 79;
    q.n_resources = 2;
    q.seed = 3;
    const auto inst = vmr::generate_synthetic(q);
    CHECK(inst.num_machines() == 4);
    CHECK(inst.num_vms() == 100);
    CHECK(inst.num_services() == 79);
    CHECK(inst.num_resources() == 2);
    CHECK(vmr::validate(inst).empty());
  }
  SUBCASE("many seeds stay valid") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      vmr::GeneratorParams q;
      q.seed = seed;
      q.n_machines = 6;
      q.n_vms = 30;
      q.n_services = 12;
      q.n_neighborhoods = 3;
      const auto inst = vmr::generate_synthetic(q);
      CHECK(vmr::validate(inst).empty());
      CHECK(oracle::feasible(inst, vmr::initial_assignment(inst).target));
    }
  }
  SUBCASE("bad parameters") {
    vmr::GeneratorParams q;
    q.n_services = 30;  // more services than VMs
    CHECK_THROWS_AS(vmr::generate_synthetic(q), vmr::GenerationError);
  }
}

TEST_CASE("bundled fixtures load") {
  for (const char* name : {"tiny1.vmr", "a_1_1_like.vmr", "medium.vmr"}) {
    CAPTURE(name);
    const auto inst = vmr::load_instance(fixtures::data_dir() + "/" + name);
    CHECK(vmr::validate(inst).empty());
  }
  const auto a11 = vmr::load_instance(fixtures::data_dir() + "/a_1_1_like.vmr");
  CHECK(a11.num_machines() == 4);
  CHECK(a11.num_vms() == 100);
  CHECK(a11.num_services() == 79);
  CHECK(a11.time_budget_s == 30.0);
}
