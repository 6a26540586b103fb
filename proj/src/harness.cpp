#include "vmr/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "vmr/kernels.hpp"

namespace vmr {

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::exact: return "exact";
    case Mode::meta: return "meta";
    case Mode::hybrid: return "hybrid";
    case Mode::gap_sweep: return "gap_sweep";
    case Mode::vector_sweep: return "vector_sweep";
  }
  return "?";
}

Mode parse_mode(const std::string& name) {
  for (Mode m : {Mode::exact, Mode::meta, Mode::hybrid, Mode::gap_sweep, Mode::vector_sweep}) {
    if (name == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown mode '" + name + "'");
}

void ExperimentConfig::validate() const {
  if (runs < 1) throw std::invalid_argument("runs must be at least 1");
  if (budget_s < 0.0) throw std::invalid_argument("budget must be positive");
  if (!(gap >= 0.0 && gap <= 1.0)) throw std::invalid_argument("gap must lie in [0, 1]");
  if (k_vectors < 1) throw std::invalid_argument("vector count must be at least 1");
  if (!(hybrid_exact_share > 0.0 && hybrid_exact_share <= 1.0)) throw std::invalid_argument("hybrid exact share must lie in (0, 1]");
  meta.validate();
}

const ModeSummary* ExperimentReport::find(const std::string& mode) const {
  for (const auto& s : summary) {
    if (s.mode == mode) return &s;
  }
  return nullptr;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

// Pins the kernels to one thread for the lifetime of the guard.
class ThreadGuard {
 public:
  explicit ThreadGuard(bool single) : active_(single), saved_(kernel_threads()) {
    if (active_) set_kernel_threads(1);
  }
  ~ThreadGuard() {
    if (active_) set_kernel_threads(saved_);
  }
  ThreadGuard(const ThreadGuard&) = delete;
  ThreadGuard& operator=(const ThreadGuard&) = delete;

 private:
  bool active_;
  int saved_;
};

double budget_of(const Instance& inst, const ExperimentConfig& cfg) {
  const double b = cfg.budget_s > 0.0 ? cfg.budget_s : inst.time_budget_s;
  if (!(b > 0.0)) throw std::invalid_argument("budget must be positive");
  return b;
}

SolverConfig solver_config(const ExperimentConfig& cfg, double gap) {
  SolverConfig sc;
  sc.gap = gap;
  sc.node_limit = cfg.node_limit;
  sc.pool_all_feasible = cfg.pool_all_feasible;
  return sc;
}

MetaConfig meta_config(const ExperimentConfig& cfg, int run, double time_limit_s) {
  MetaConfig mc = cfg.meta;
  mc.seed = cfg.meta.seed + static_cast<std::uint64_t>(run);
  mc.time_limit_s = time_limit_s;
  mc.parallel = cfg.meta.parallel && !cfg.single_thread;
  return mc;
}

std::string instance_name(const ExperimentConfig& cfg) {
  return cfg.instance_path.empty() ? std::string("instance") : std::filesystem::path(cfg.instance_path).stem().string();
}

std::string echo(const ExperimentConfig& cfg, double budget) {
  std::ostringstream out;
  out << "instance=" << cfg.instance_path << '\n'
      << "mode=" << to_string(cfg.mode) << '\n'
      << "gap=" << format_real(cfg.gap) << '\n'
      << "vectors=" << cfg.k_vectors << '\n'
      << "budget_s=" << format_real(budget) << '\n'
      << "runs=" << cfg.runs << '\n'
      << "seed=" << cfg.meta.seed << '\n'
      << "population=" << cfg.meta.population_size << '\n'
      << "generations=" << cfg.meta.generations << '\n'
      << "pls_targets=" << cfg.meta.pls_targets << '\n'
      << "node_limit=" << cfg.node_limit << '\n'
      << "pool_all_feasible=" << (cfg.pool_all_feasible ? 1 : 0) << '\n'
      << "single_thread=" << (cfg.single_thread ? 1 : 0) << '\n';
  return out.str();
}

void execute(const Instance& inst, const ExperimentConfig& cfg, ExperimentReport& report) {
  cfg.validate();
  const double budget = budget_of(inst, cfg);
  ThreadGuard threads(cfg.single_thread);
  report.config_echo += echo(cfg, budget);
  const std::string mode = to_string(cfg.mode);

  auto record = [&](int run, ParetoArchive front, double elapsed) {
    RunRecord r;
    r.mode = mode;
    r.run = run;
    r.solutions = count_solutions(front);
    r.elapsed_s = elapsed;
    r.front = std::move(front);
    report.runs.push_back(std::move(r));
  };

  switch (cfg.mode) {
    case Mode::exact: {
      const auto start = Clock::now();
      auto result = multi_vector_run(inst, cfg.k_vectors, solver_config(cfg, cfg.gap), budget);
      record(0, std::move(result.archive), seconds_since(start));
      break;
    }
    case Mode::meta: {
      for (int i = 0; i < cfg.runs; ++i) {
        const auto start = Clock::now();
        auto front = hybrid_pipeline(inst, ParetoArchive{}, meta_config(cfg, i, budget));
        record(i, std::move(front), seconds_since(start));
      }
      break;
    }
    case Mode::hybrid: {
      // The exact phase is deterministic, so it is solved once and shared by
      // every repetition of the stochastic phase.
      const auto start = Clock::now();
      const auto exact = multi_vector_run(inst, cfg.k_vectors, solver_config(cfg, cfg.gap), budget * cfg.hybrid_exact_share);
      const double exact_s = seconds_since(start);
      for (int i = 0; i < cfg.runs; ++i) {
        const auto t = Clock::now();
        const double remaining = std::max(budget - exact_s, 1e-3);
        auto front = hybrid_pipeline(inst, exact.archive, meta_config(cfg, i, remaining));
        record(i, std::move(front), exact_s + seconds_since(t));
      }
      break;
    }
    case Mode::gap_sweep: {
      const WeightVector identity(1.0, 1.0, 1.0);
      for (std::size_t i = 0; i < kSweepGaps.size(); ++i) {
        SolverConfig sc = solver_config(cfg, kSweepGaps[i]);
        sc.time_limit_s = budget;
        const auto rep = solve_weighted(inst, identity, sc);
        GapSweepRow row;
        row.gap = kSweepGaps[i];
        row.elapsed_s = rep.elapsed_s;
        row.nodes = rep.nodes_explored;
        row.status = rep.status;
        row.incumbent = rep.incumbent ? rep.incumbent->value : 0.0;
        row.lower_bound = rep.lower_bound;
        row.achieved_gap = rep.achieved_gap;
        report.gap_sweep.push_back(row);
        ParetoArchive front;
        for (const auto& e : rep.pool) front.insert(e);
        record(static_cast<int>(i), std::move(front), rep.elapsed_s);
      }
      break;
    }
    case Mode::vector_sweep: {
      for (int k = 1; k <= cfg.k_vectors; ++k) {
        const auto start = Clock::now();
        auto result = multi_vector_run(inst, k, solver_config(cfg, cfg.gap), budget);
        record(k, std::move(result.archive), seconds_since(start));
      }
      break;
    }
  }
}

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

void score(ExperimentReport& report) {
  std::vector<ObjectiveVector> all;
  for (const auto& r : report.runs) {
    const auto pts = r.front.points();
    all.insert(all.end(), pts.begin(), pts.end());
  }
  report.reference = reference_point(all);
  for (auto& r : report.runs) r.hypervolume = hypervolume(r.front, report.reference);

  report.summary.clear();
  for (const auto& r : report.runs) {
    if (report.find(r.mode)) continue;
    ModeSummary s;
    s.mode = r.mode;
    std::vector<double> hv;
    for (const auto& q : report.runs) {
      if (q.mode != r.mode) continue;
      hv.push_back(q.hypervolume);
      s.mean_solutions += static_cast<double>(q.solutions);
      s.mean_elapsed_s += q.elapsed_s;
    }
    const double n = static_cast<double>(hv.size());
    for (double x : hv) s.mean_hypervolume += x;
    s.mean_hypervolume /= n;
    s.mean_solutions /= n;
    s.mean_elapsed_s /= n;
    s.median_hypervolume = median(hv);
    report.summary.push_back(s);
  }
  report.config_echo += "reference=" + format_real(report.reference[0]) + " " + format_real(report.reference[1]) + " " +
                        format_real(report.reference[2]) + "\n";
}

double parse_real(const std::string& text, int line) {
  double x = 0.0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc{} || p != text.data() + text.size()) {
    throw std::runtime_error("report line " + std::to_string(line) + ": bad number '" + text + "'");
  }
  return x;
}

}  // namespace

ExperimentReport run(const Instance& inst, const ExperimentConfig& cfg) { return compare(inst, {cfg}); }

ExperimentReport run(const ExperimentConfig& cfg) { return compare({cfg}); }

ExperimentReport compare(const Instance& inst, const std::vector<ExperimentConfig>& cfgs) {
  if (cfgs.empty()) throw std::invalid_argument("compare needs at least one configuration");
  ExperimentReport report;
  report.instance_name = instance_name(cfgs.front());
  for (const auto& cfg : cfgs) execute(inst, cfg, report);
  score(report);
  if (!cfgs.front().out_dir.empty()) write_outputs(report, cfgs.front().out_dir);
  return report;
}

ExperimentReport compare(const std::vector<ExperimentConfig>& cfgs) {
  if (cfgs.empty()) throw std::invalid_argument("compare needs at least one configuration");
  for (const auto& c : cfgs) {
    if (c.instance_path != cfgs.front().instance_path) throw std::invalid_argument("compared configurations must share one instance");
  }
  return compare(load_instance(cfgs.front().instance_path), cfgs);
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  out << "mode,run,hypervolume,solutions,elapsed_s\n";
  for (const auto& r : report.runs) {
    out << r.mode << ',' << r.run << ',' << format_real(r.hypervolume) << ',' << r.solutions << ','
        << format_real(r.elapsed_s) << '\n';
  }
}

std::vector<CsvRow> read_report_csv(std::istream& in) {
  std::vector<CsvRow> rows;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (number == 1 || line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 5) throw std::runtime_error("report line " + std::to_string(number) + ": expected 5 fields");
    CsvRow row;
    row.mode = f[0];
    row.run = static_cast<int>(parse_real(f[1], number));
    row.hypervolume = parse_real(f[2], number);
    row.solutions = static_cast<std::size_t>(parse_real(f[3], number));
    row.elapsed_s = parse_real(f[4], number);
    rows.push_back(row);
  }
  return rows;
}

void write_outputs(const ExperimentReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto open = [&](const std::string& name) {
    std::ofstream f(fs::path(dir) / name);
    if (!f) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
    return f;
  };
  {
    auto f = open("report.csv");
    write_report_csv(f, report);
  }
  for (const auto& r : report.runs) {
    auto f = open("front_" + r.mode + "_" + std::to_string(r.run) + ".txt");
    write_archive(f, r.front, report.instance_name, report.reference);
  }
  {
    auto f = open("config.echo");
    f << report.config_echo;
  }
  if (!report.gap_sweep.empty()) {
    auto f = open("gap_sweep.csv");
    f << "gap,elapsed_s,nodes,status,incumbent,lower_bound,achieved_gap\n";
    for (const auto& g : report.gap_sweep) {
      f << format_real(g.gap) << ',' << format_real(g.elapsed_s) << ',' << g.nodes << ',' << to_string(g.status) << ','
        << format_real(g.incumbent) << ',' << format_real(g.lower_bound) << ',' << format_real(g.achieved_gap) << '\n';
    }
  }
  if (std::any_of(report.runs.begin(), report.runs.end(), [](const RunRecord& r) { return r.mode == "vector_sweep"; })) {
    auto f = open("vector_sweep.csv");
    f << "vectors,hypervolume,solutions,elapsed_s\n";
    for (const auto& r : report.runs) {
      if (r.mode != "vector_sweep") continue;
      f << r.run << ',' << format_real(r.hypervolume) << ',' << r.solutions << ',' << format_real(r.elapsed_s) << '\n';
    }
  }
}

}  // namespace vmr
