// vmreassign: command-line front end for the experiment harness.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "vmr/exact_solver.hpp"
#include "vmr/harness.hpp"
#include "vmr/instance.hpp"

namespace {

void add_experiment_options(CLI::App& cmd, vmr::ExperimentConfig& cfg, std::uint64_t& seed) {
  cmd.add_option("--instance", cfg.instance_path, "instance file (vmr format)")->required()->check(CLI::ExistingFile);
  cmd.add_option("--gap", cfg.gap, "relative optimality gap")->check(CLI::Range(0.0, 1.0));
  cmd.add_option("--vectors", cfg.k_vectors, "number of weight vectors")->check(CLI::PositiveNumber);
  cmd.add_option("--budget", cfg.budget_s, "wall-clock budget in seconds (default: the instance's)");
  cmd.add_option("--runs", cfg.runs, "repetitions of the stochastic modes")->check(CLI::PositiveNumber);
  cmd.add_option("--seed", seed, "base random seed");
  cmd.add_option("--out", cfg.out_dir, "output directory");
  cmd.add_option("--node-limit", cfg.node_limit, "branch-and-bound node limit per vector (0 = none)");
  cmd.add_option("--population", cfg.meta.population_size, "population size");
  cmd.add_option("--generations", cfg.meta.generations, "evolutionary generations");
  cmd.add_option("--pls-targets", cfg.meta.pls_targets, "members refined by local search");
  cmd.add_flag("--single-thread", cfg.single_thread, "run every kernel on one thread");
  cmd.add_flag("!--incumbents-only", cfg.pool_all_feasible, "pool only incumbents instead of every feasible leaf");
}

void print_summary(const vmr::ExperimentReport& report) {
  std::cout << "reference " << vmr::format_real(report.reference[0]) << ' ' << vmr::format_real(report.reference[1]) << ' '
            << vmr::format_real(report.reference[2]) << '\n';
  std::cout << "mode\tmean_hv\tmedian_hv\tmean_sol\tmean_time_s\n";
  for (const auto& s : report.summary) {
    std::cout << s.mode << '\t' << s.mean_hypervolume << '\t' << s.median_hypervolume << '\t' << s.mean_solutions << '\t'
              << s.mean_elapsed_s << '\n';
  }
  for (const auto& g : report.gap_sweep) {
    std::cout << "gap " << g.gap << '\t' << g.elapsed_s << " s\t" << g.nodes << " nodes\t" << vmr::to_string(g.status) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-objective VM reassignment: exact, metaheuristic and hybrid runs"};
  app.require_subcommand(1);

  vmr::ExperimentConfig run_cfg;
  std::uint64_t run_seed = 1;
  std::string mode_name = "exact";
  auto* run_cmd = app.add_subcommand("run", "run one mode");
  add_experiment_options(*run_cmd, run_cfg, run_seed);
  run_cmd->add_option("--mode", mode_name, "exact | meta | hybrid | gap_sweep | vector_sweep");

  vmr::ExperimentConfig cmp_cfg;
  std::uint64_t cmp_seed = 1;
  std::vector<std::string> modes{"exact", "meta", "hybrid"};
  auto* cmp_cmd = app.add_subcommand("compare", "run several modes against one reference point");
  add_experiment_options(*cmp_cmd, cmp_cfg, cmp_seed);
  cmp_cmd->add_option("--modes", modes, "modes to compare")->delimiter(',');

  std::string lp_instance;
  std::string lp_out;
  int lp_vector = 1;
  auto* lp_cmd = app.add_subcommand("export-lp", "write the weighted model in LP format");
  lp_cmd->add_option("--instance", lp_instance, "instance file")->required()->check(CLI::ExistingFile);
  lp_cmd->add_option("--vector", lp_vector, "1-based index of the weight vector")->check(CLI::PositiveNumber);
  lp_cmd->add_option("--out", lp_out, "output file (default: stdout)");

  vmr::GeneratorParams gen;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("generate", "write a synthetic instance");
  gen_cmd->add_option("--machines", gen.n_machines);
  gen_cmd->add_option("--vms", gen.n_vms);
  gen_cmd->add_option("--services", gen.n_services);
  gen_cmd->add_option("--resources", gen.n_resources);
  gen_cmd->add_option("--locations", gen.n_locations);
  gen_cmd->add_option("--neighborhoods", gen.n_neighborhoods);
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--budget", gen.time_budget_s);
  gen_cmd->add_option("--out", gen_out, "output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      run_cfg.meta.seed = run_seed;
      run_cfg.mode = vmr::parse_mode(mode_name);
      print_summary(vmr::run(run_cfg));
    } else if (*cmp_cmd) {
      cmp_cfg.meta.seed = cmp_seed;
      std::vector<vmr::ExperimentConfig> cfgs;
      for (const auto& m : modes) {
        auto c = cmp_cfg;
        c.mode = vmr::parse_mode(m);
        cfgs.push_back(c);
      }
      print_summary(vmr::compare(cfgs));
    } else if (*lp_cmd) {
      const auto inst = vmr::load_instance(lp_instance);
      const auto w = vmr::weight_vectors(lp_vector).back();
      if (lp_out.empty()) {
        vmr::export_lp(std::cout, inst, w);
      } else {
        std::ofstream f(lp_out);
        if (!f) throw std::runtime_error("cannot write " + lp_out);
        vmr::export_lp(f, inst, w);
      }
    } else if (*gen_cmd) {
      const auto inst = vmr::generate_synthetic(gen);
      if (gen_out.empty()) {
        vmr::write_instance(std::cout, inst);
      } else {
        std::ofstream f(gen_out);
        if (!f) throw std::runtime_error("cannot write " + gen_out);
        vmr::write_instance(f, inst);
      }
    }
  } catch (const vmr::SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << '\n';
    return 2;
  } catch (const vmr::InstanceError& e) {
    std::cerr << "invalid instance: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
