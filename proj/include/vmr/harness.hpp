#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vmr/exact_solver.hpp"
#include "vmr/instance.hpp"
#include "vmr/metaheuristic.hpp"
#include "vmr/pareto.hpp"

namespace vmr {

enum class Mode { exact, meta, hybrid, gap_sweep, vector_sweep };

const char* to_string(Mode mode);
/// Throws std::invalid_argument on an unknown name.
Mode parse_mode(const std::string& name);

/// Gaps visited by the gap sweep, loosest first.
inline const std::vector<double> kSweepGaps = {0.5, 0.2, 0.1, 0.05, 0.01, 0.005, 0.001};

struct ExperimentConfig {
  std::string instance_path;
  Mode mode = Mode::exact;
  double gap = 0.05;
  int k_vectors = 1;
  MetaConfig meta;
  double budget_s = 0.0;  // 0 takes the instance's time budget
  int runs = 10;          // repetitions of the stochastic modes
  std::string out_dir;    // empty: nothing written
  bool single_thread = false;
  std::uint64_t node_limit = 0;  // per weight vector, exact phases only
  bool pool_all_feasible = true;
  // Share of the budget given to the exact phase of hybrid runs.
  double hybrid_exact_share = 0.8;

  void validate() const;
};

struct RunRecord {
  std::string mode;
  int run = 0;
  double hypervolume = 0.0;
  std::size_t solutions = 0;
  double elapsed_s = 0.0;
  ParetoArchive front;
};

struct ModeSummary {
  std::string mode;
  double mean_hypervolume = 0.0;
  double median_hypervolume = 0.0;
  double mean_solutions = 0.0;
  double mean_elapsed_s = 0.0;
};

struct GapSweepRow {
  double gap = 0.0;
  double elapsed_s = 0.0;
  std::uint64_t nodes = 0;
  SolveStatus status = SolveStatus::skipped;
  double incumbent = 0.0;
  double lower_bound = 0.0;
  double achieved_gap = 0.0;
};

struct ExperimentReport {
  std::string instance_name;
  Point3 reference{};
  std::vector<RunRecord> runs;
  std::vector<ModeSummary> summary;
  std::vector<GapSweepRow> gap_sweep;  // filled by gap_sweep mode
  std::string config_echo;

  const ModeSummary* find(const std::string& mode) const;
};

/// Executes one configuration. Hypervolumes use a reference point built from
/// this run's fronts only. Writes outputs when cfg.out_dir is set.
ExperimentReport run(const ExperimentConfig& cfg);
ExperimentReport run(const Instance& inst, const ExperimentConfig& cfg);

/// Executes every configuration on one instance and scores all fronts against
/// a single shared reference point.
ExperimentReport compare(const std::vector<ExperimentConfig>& cfgs);
ExperimentReport compare(const Instance& inst, const std::vector<ExperimentConfig>& cfgs);

/// report.csv: header then one row per run (mode,run,hypervolume,solutions,elapsed_s).
void write_report_csv(std::ostream& out, const ExperimentReport& report);

struct CsvRow {
  std::string mode;
  int run = 0;
  double hypervolume = 0.0;
  std::size_t solutions = 0;
  double elapsed_s = 0.0;

  bool operator==(const CsvRow&) const = default;
};
std::vector<CsvRow> read_report_csv(std::istream& in);

/// report.csv, front_<mode>_<run>.txt, config.echo and, when present,
/// gap_sweep.csv / vector_sweep.csv under `dir` (created if missing).
void write_outputs(const ExperimentReport& report, const std::string& dir);

}  // namespace vmr
