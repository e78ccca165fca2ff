#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ccmckp/harness.hpp"
#include "ccmckp/instance_io.hpp"
#include "test_support.hpp"

using namespace ccmckp;
using ccmckp::testing::fixed_instance;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ccmckp_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Five classes of three degenerate items: the exact front is enumerable.
Instance toy5() {
  return fixed_instance({{9, 5, 1}, {8, 4, 2}, {7, 6, 1}, {9, 3, 2}, {6, 5, 1}},
                        {{1, 2, 4}, {1, 3, 4}, {1, 2, 5}, {1, 3, 4}, {1, 2, 3}}, 13);
}

}  // namespace

TEST_CASE("instance references") {
  const InstanceRef a = InstanceRef::parse("lab:ls3:7");
  CHECK(a.kind == InstanceRef::Kind::Lab);
  CHECK(a.scale == Scale::ls3);
  CHECK(a.seed == 7u);
  CHECK(InstanceRef::parse(a.to_string()).to_string() == a.to_string());
  const InstanceRef b = InstanceRef::parse("app:ls1");
  CHECK(b.kind == InstanceRef::Kind::App);
  CHECK_FALSE(b.seed.has_value());
  CHECK(b.load(5) == generate_app_instance(Scale::ls1, 5));
  CHECK(InstanceRef::parse("file:x.json").path == "x.json");
  CHECK(InstanceRef::parse("fixtures/x.json").kind == InstanceRef::Kind::File);
  CHECK_THROWS_AS(InstanceRef::parse("lab:ls9"), std::invalid_argument);
}

TEST_CASE("budgets") {
  CHECK(Budget::parse("generations:40").generations == 40);
  const Budget w = Budget::parse("walltime:Full");
  CHECK(w.kind == Budget::Kind::WallTimeMatched);
  CHECK(w.anchor == Variant::Full);
  CHECK(Budget::parse(w.to_string()).to_string() == w.to_string());
  CHECK_THROWS_AS(Budget::parse("minutes:3"), std::invalid_argument);
}

TEST_CASE("plan parsing") {
  const ExperimentPlan plan = ExperimentPlan::parse(R"(
# comment
format = ccmckp-plan/1
seed = 9
instances = lab:ls1:1, app:ls2
algorithms = Full, PlainNsga2
repetitions = 3
budget = generations:7
rcl_samples = 1e5
population_size = 40
schedule = 1000:0.999, 10000:inf
PlainNsga2.crossover_prob = 0.8
output = out/dir
emit_runs = true
)");
  CHECK(plan.seed == 9);
  CHECK(plan.instances.size() == 2);
  CHECK(plan.algorithms.size() == 2);
  CHECK(plan.algorithms[1].overrides.at("crossover_prob") == "0.8");
  CHECK(plan.repetitions == 3);
  CHECK(plan.budget.generations == 7);
  CHECK(plan.rcl_samples == 100'000);
  CHECK(plan.base.population_size == 40);
  CHECK(plan.base.schedule.final_samples() == 10'000);
  CHECK(plan.output_dir == "out/dir");
  CHECK(plan.emit_runs);

  CHECK_THROWS_AS(ExperimentPlan::parse("instances = lab:ls1\nalgorithms = Full\nbogus = 1\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(ExperimentPlan::parse("instances = lab:ls1\nalgorithms = Full\nNoHybridInit.lambda = 1\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      ExperimentPlan::parse("instances = lab:ls1\nalgorithms = PlainNsga2\nbudget = walltime:Full\n"),
      std::invalid_argument);
  CHECK_THROWS_AS(ExperimentPlan::parse("algorithms = Full\n"), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentPlan::parse("instances = lab:ls1\nalgorithms = Full\nrepetitions = x\n"),
                  std::invalid_argument);
}

TEST_CASE("zero-generation plan yields one row from the initial population") {
  const fs::path dir = scratch_dir("gen0");
  ExperimentPlan plan;
  plan.instances = {InstanceRef::parse("lab:ls1:1")};
  plan.algorithms = {AlgorithmSpec{Variant::Full, {}}};
  plan.repetitions = 1;
  plan.budget = Budget::parse("generations:0");
  plan.rcl_samples = 10'000;
  plan.base.population_size = 10;
  plan.base.schedule = StageSchedule::parse("1000:0.999,10000:inf");
  plan.output_dir = dir;
  const ResultsBundle b = run_plan(plan);
  REQUIRE(b.cells.size() == 1);
  CHECK(b.cells[0].status == "ok");
  CHECK(b.cells[0].generations == 0);
  CHECK(b.cells[0].evaluations == 10);
  CHECK(b.cells[0].hv.has_value());
  const std::string results = slurp(dir / "results.tsv");
  CHECK(results.rfind("# ccmckp-results 1\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : results) lines += c == '\n';
  CHECK(lines == 3);
  CHECK(fs::exists(dir / "summary.tsv"));
  CHECK(fs::exists(dir / "reference.tsv"));
  CHECK(fs::exists(dir / "timing.tsv"));
  CHECK(fs::exists(dir / "fronts" / "LAB-ls1-s1__Full__r0.tsv"));
}

TEST_CASE("plans are reproducible and failures are contained") {
  const fs::path dir = scratch_dir("repro");
  save_instance(toy5(), dir / "toy5.json");
  save_instance(fixed_instance({{1, 2}, {1, 2}}, {{6, 5}, {6, 5}}, 9), dir / "hopeless.json");

  auto make_plan = [&](const std::string& out) {
    ExperimentPlan plan;
    plan.seed = 5;
    plan.instances = {InstanceRef::parse("file:" + (dir / "toy5.json").string()),
                      InstanceRef::parse((dir / "hopeless.json").string()),
                      InstanceRef::parse((dir / "missing.json").string())};
    plan.algorithms = {AlgorithmSpec{Variant::Full, {}}, AlgorithmSpec{Variant::PlainNsga2, {}}};
    plan.repetitions = 3;
    plan.budget = Budget::parse("generations:15");
    plan.rcl_samples = 1000;
    plan.base.population_size = 12;
    plan.base.local_search_prob = 0.3;
    plan.base.schedule = StageSchedule::parse("10:0.999,20:inf");
    plan.output_dir = dir / out;
    plan.emit_runs = true;
    return plan;
  };
  const ResultsBundle a = run_plan(make_plan("a"));
  run_plan(make_plan("b"));
  for (const char* f : {"results.tsv", "summary.tsv", "reference.tsv"})
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  for (const auto& e : fs::directory_iterator(dir / "a" / "fronts"))
    CHECK(slurp(e.path()) == slurp(dir / "b" / "fronts" / e.path().filename()));
  for (const auto& e : fs::directory_iterator(dir / "a" / "runs"))
    CHECK(slurp(e.path()) == slurp(dir / "b" / "runs" / e.path().filename()));

  REQUIRE(a.cells.size() == 18);
  // toy5: every cell ok. hopeless: Full fails, PlainNsga2 runs with an empty front.
  // missing: every cell records the load error.
  for (const auto& c : a.cells) {
    if (c.instance == "toy") {
      CHECK(c.status == "ok");
    } else if (c.instance == "toy#1") {
      if (c.algorithm == "Full") {
        CHECK(c.status.rfind("error:", 0) == 0);
      } else {
        CHECK(c.status == "ok");
        CHECK(c.front.empty());
        CHECK_FALSE(c.hv.has_value());
        CHECK(c.fsr == 0.0);
      }
    } else {
      CHECK(c.status.rfind("error:", 0) == 0);
    }
  }
  const std::string summary = slurp(dir / "a" / "summary.tsv");
  CHECK(summary.find("toy#1\tPlainNsga2\t3\t0\t-\t-") != std::string::npos);

  // On the enumerable toy, Full matches or beats plain NSGA-II on mean HV.
  double full = 0.0, plain = 0.0;
  for (const auto& c : a.cells) {
    if (c.instance != "toy") continue;
    (c.algorithm == "Full" ? full : plain) += *c.hv;
  }
  CHECK(full >= plain);
}

TEST_CASE("wall-time matched budgets run the anchor first") {
  ExperimentPlan plan;
  plan.instances = {InstanceRef::parse("lab:ls1:2")};
  plan.algorithms = {AlgorithmSpec{Variant::PlainNsga2, {}}, AlgorithmSpec{Variant::Full, {}}};
  plan.repetitions = 1;
  plan.budget = Budget::parse("walltime:Full:2");
  plan.rcl_samples = 1000;
  plan.base.population_size = 10;
  plan.base.schedule = StageSchedule::parse("100:0.999,1000:inf");
  plan.output_dir.clear();
  const ResultsBundle b = run_plan(plan);
  REQUIRE(b.cells.size() == 2);
  CHECK(b.cells[0].algorithm == "Full");
  CHECK(b.cells[0].generations == 2);
  CHECK(b.cells[1].algorithm == "PlainNsga2");
  CHECK(b.cells[1].generations >= 1);
  // Capped at the anchor's time plus at most one generation.
  const double per_gen = b.cells[1].wall_seconds / b.cells[1].generations;
  CHECK(b.cells[1].wall_seconds <= b.cells[0].wall_seconds + per_gen + 0.05);
}

TEST_CASE("front files round-trip and metrics can be recomputed") {
  const fs::path dir = scratch_dir("fronts");
  ResultsBundle b;
  CellResult empty;
  empty.instance = "X";
  empty.algorithm = "Full";
  CellResult one = empty;
  one.repetition = 1;
  one.front = {{3.0, -0.95}};
  CellResult many = empty;
  many.algorithm = "PlainNsga2";
  many.front = {{1.0, -0.9}, {2.5, -0.97}, {4.0, -0.999999999999}};
  b.cells = {empty, one, many};
  const auto paths = emit_front_plots_data(b, dir);
  REQUIRE(paths.size() == 3);
  CHECK(slurp(paths[0]) ==
        "# ccmckp-front 1 instance=X algorithm=Full repetition=0\ncost\tcl\n");
  std::vector<FrontFile> files;
  for (const auto& p : paths) files.push_back(read_front_file(p));
  CHECK(files[0].points.empty());
  CHECK(files[1].points == one.front);
  CHECK(files[2].points == many.front);
  CHECK(files[2].algorithm == "PlainNsga2");

  const ResultsBundle r = recompute_metrics(files);
  REQUIRE(r.cells.size() == 3);
  CHECK(r.cells[0].hv == 0.0);
  CHECK(r.cells[0].igd == kInfiniteDistance);
  CHECK(r.cells[2].igd_plus == 0.0);
  CHECK(*r.cells[2].hv > *r.cells[1].hv);
}

TEST_CASE("evaluator comparison on degenerate populations") {
  const Instance inst = fixed_instance({{1, 2}, {1, 2}}, {{9, 1}, {9, 1}}, 5);
  const std::vector<Solution> infeasible = {{{0, 0}}, {{0, 1}}, {{1, 0}}};
  const StageSchedule sched = StageSchedule::parse("100:0.999,1000:0.9999,5000:inf");
  const EvaluatorComparison a = compare_evaluators(inst, infeasible, sched, 5000, 1);
  CHECK(a.opera_samples == 3 * 100);
  CHECK(a.fixed_samples == 3 * 5000);
  CHECK(a.dominance_agreement == 1.0);
  CHECK(a.max_abs_delta == 0.0);

  const std::vector<Solution> feasible = {{{1, 1}}, {{1, 1}}};
  const EvaluatorComparison b = compare_evaluators(inst, feasible, sched, 5000, 1);
  CHECK(b.opera_samples == b.fixed_samples);
  CHECK(b.sample_reduction() == 0.0);
  CHECK_THROWS_AS(compare_evaluators(inst, {}, sched, 10, 1), std::invalid_argument);

  const Instance lab = generate_lab_instance(Scale::ls1, 1);
  const auto sols = random_solutions(lab, 30, 4);
  CHECK(sols == random_solutions(lab, 30, 4));
  for (const auto& s : sols) CHECK(is_valid_for(lab, s));
}

TEST_CASE("mean and sample standard deviation") {
  const MeanSd s = mean_sd({1.0, 2.0, 3.0, 4.0});
  CHECK(s.mean == 2.5);
  CHECK(s.sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(mean_sd({7.0}).sd == 0.0);
  CHECK(mean_sd({}).n == 0);
}
