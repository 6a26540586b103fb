#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "vmr/harness.hpp"

using doctest::Approx;
using vmr::ExperimentConfig;
using vmr::Mode;

namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny_config(Mode mode) {
  ExperimentConfig cfg;
  cfg.instance_path = fixtures::data_dir() + "/tiny1.vmr";
  cfg.mode = mode;
  cfg.runs = 3;
  cfg.budget_s = 10.0;
  cfg.meta.population_size = 8;
  cfg.meta.generations = 4;
  cfg.meta.pls_targets = 3;
  return cfg;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("vmr_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("mode names") {
  for (Mode m : {Mode::exact, Mode::meta, Mode::hybrid, Mode::gap_sweep, Mode::vector_sweep}) {
    CHECK(vmr::parse_mode(vmr::to_string(m)) == m);
  }
  CHECK_THROWS_AS(vmr::parse_mode("cplex"), std::invalid_argument);
}

TEST_CASE("configuration errors") {
  auto cfg = tiny_config(Mode::exact);
  CHECK_NOTHROW(cfg.validate());
  SUBCASE("negative budget") {
    cfg.budget_s = -1.0;
    CHECK_THROWS_AS(vmr::run(cfg), std::invalid_argument);
  }
  SUBCASE("no runs") {
    cfg.runs = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
  SUBCASE("gap out of range") {
    cfg.gap = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
  SUBCASE("zero exact share") {
    cfg.hybrid_exact_share = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
  SUBCASE("instance without a budget") {
    auto inst = fixtures::tiny1();
    inst.time_budget_s = 0.0;
    cfg.budget_s = 0.0;
    CHECK_THROWS_AS(vmr::run(inst, cfg), std::invalid_argument);
  }
  SUBCASE("compared configurations must share an instance") {
    auto other = cfg;
    other.instance_path = fixtures::data_dir() + "/medium.vmr";
    CHECK_THROWS_AS(vmr::compare({cfg, other}), std::invalid_argument);
  }
}

TEST_CASE("exact mode on tiny1") {
  const auto report = vmr::run(tiny_config(Mode::exact));
  CHECK(report.instance_name == "tiny1");
  REQUIRE(report.runs.size() == 1);
  CHECK(report.runs[0].solutions == 1);
  // Reference (1, 34.1, 1): zero components take the absolute margin.
  CHECK(report.reference[0] == 1.0);
  CHECK(report.reference[1] == Approx(34.1));
  CHECK(report.reference[2] == 1.0);
  CHECK(report.runs[0].hypervolume == Approx(3.1));
  REQUIRE(report.find("exact"));
  CHECK(report.find("exact")->mean_hypervolume == Approx(3.1));
  CHECK(report.config_echo.find("mode=exact") != std::string::npos);
  CHECK(report.config_echo.find("reference=") != std::string::npos);
}

TEST_CASE("every mode finds the tiny1 front against one reference") {
  const auto report = vmr::compare({tiny_config(Mode::exact), tiny_config(Mode::meta), tiny_config(Mode::hybrid)});
  CHECK(report.runs.size() == 1 + 3 + 3);
  for (const auto& r : report.runs) {
    CHECK(r.solutions == 1);
    CHECK(r.hypervolume == Approx(3.1));
  }
  for (const char* mode : {"exact", "meta", "hybrid"}) {
    REQUIRE(report.find(mode));
    CHECK(report.find(mode)->median_hypervolume == Approx(3.1));
  }
}

TEST_CASE("single-threaded hybrid runs are reproducible") {
  const auto inst = fixtures::random_medium(4);
  ExperimentConfig cfg;
  cfg.mode = Mode::hybrid;
  cfg.runs = 2;
  cfg.budget_s = 1000.0;
  cfg.node_limit = 2000;
  cfg.k_vectors = 3;
  cfg.single_thread = true;
  cfg.meta.population_size = 10;
  cfg.meta.generations = 3;
  cfg.meta.pls_targets = 2;
  const auto a = vmr::run(inst, cfg);
  const auto b = vmr::run(inst, cfg);
  REQUIRE(a.runs.size() == 2);
  for (std::size_t i = 0; i < a.runs.size(); ++i) {
    CHECK(a.runs[i].front.canonical() == b.runs[i].front.canonical());
    CHECK(a.runs[i].hypervolume == b.runs[i].hypervolume);
  }
}

TEST_CASE("gap sweep") {
  const auto inst = fixtures::random_medium(6);
  ExperimentConfig cfg;
  cfg.mode = Mode::gap_sweep;
  cfg.budget_s = 1000.0;
  cfg.node_limit = 20000;
  const auto report = vmr::run(inst, cfg);
  REQUIRE(report.gap_sweep.size() == vmr::kSweepGaps.size());
  CHECK(report.runs.size() == vmr::kSweepGaps.size());
  for (std::size_t i = 0; i < report.gap_sweep.size(); ++i) {
    const auto& row = report.gap_sweep[i];
    CHECK(row.gap == vmr::kSweepGaps[i]);
    if (i > 0) CHECK(row.nodes >= report.gap_sweep[i - 1].nodes);
    if (row.status == vmr::SolveStatus::optimal_within_gap) CHECK(row.achieved_gap <= row.gap + vmr::kGapEpsilon);
    CHECK(row.lower_bound <= row.incumbent + 1e-9 * std::max(1.0, row.incumbent));
  }
}

TEST_CASE("vector sweep") {
  auto cfg = tiny_config(Mode::vector_sweep);
  cfg.k_vectors = 4;
  const auto report = vmr::run(cfg);
  REQUIRE(report.runs.size() == 4);
  for (int k = 1; k <= 4; ++k) CHECK(report.runs[static_cast<std::size_t>(k - 1)].run == k);
}

TEST_CASE("report CSV round-trips") {
  const auto report = vmr::compare({tiny_config(Mode::exact), tiny_config(Mode::meta)});
  std::ostringstream out;
  vmr::write_report_csv(out, report);
  CHECK(out.str().rfind("mode,run,hypervolume,solutions,elapsed_s\n", 0) == 0);
  std::istringstream in(out.str());
  const auto rows = vmr::read_report_csv(in);
  REQUIRE(rows.size() == report.runs.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = report.runs[i];
    CHECK(rows[i] == vmr::CsvRow{r.mode, r.run, r.hypervolume, r.solutions, r.elapsed_s});
  }
  std::istringstream bad("mode,run,hypervolume,solutions,elapsed_s\nexact,0,x,1,0.1\n");
  CHECK_THROWS_AS(vmr::read_report_csv(bad), std::runtime_error);
}

TEST_CASE("output files") {
  const auto dir = scratch("outputs");
  auto cfg = tiny_config(Mode::hybrid);
  cfg.runs = 2;
  cfg.out_dir = dir.string();
  vmr::run(cfg);
  CHECK(fs::exists(dir / "report.csv"));
  CHECK(fs::exists(dir / "config.echo"));
  CHECK(fs::exists(dir / "front_hybrid_0.txt"));
  CHECK(fs::exists(dir / "front_hybrid_1.txt"));
  std::ifstream front(dir / "front_hybrid_1.txt");
  const auto archive = vmr::read_archive(front);
  REQUIRE(archive.size() == 1);
  CHECK(archive.entries()[0].objectives == vmr::ObjectiveVector{0, 31, 0});

  const auto sweep = scratch("sweep");
  auto s = tiny_config(Mode::gap_sweep);
  s.out_dir = sweep.string();
  vmr::run(s);
  CHECK(fs::exists(sweep / "gap_sweep.csv"));
  fs::remove_all(dir);
  fs::remove_all(sweep);
}
