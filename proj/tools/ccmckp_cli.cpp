#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "ccmckp/generators.hpp"
#include "ccmckp/harness.hpp"
#include "ccmckp/instance_io.hpp"

using namespace ccmckp;
namespace fs = std::filesystem;

namespace {

// Sample counts are easier to type as 1e6.
std::uint64_t count_arg(const std::string& text) {
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size() || v < 1 || v != std::floor(v) || v > 1e15)
    throw CLI::ValidationError("expected a positive integer count, got '" + text + "'");
  return static_cast<std::uint64_t>(v);
}

std::string label_for(bool app, Scale s) { return std::string(app ? "APP-" : "LAB-") + std::string(scale_name(s)); }

void print_summary(const ResultsBundle& b) {
  std::printf("%-20s %-14s %4s %10s %10s %10s %6s %6s\n", "instance", "algorithm", "rep", "hv", "igd",
              "igd+", "fsr", "gens");
  auto show = [](const std::optional<double>& v) {
    char buf[32];
    if (!v) return std::string("-");
    std::snprintf(buf, sizeof buf, "%.4g", *v);
    return std::string(buf);
  };
  for (const auto& c : b.cells) {
    if (c.status != "ok") {
      std::printf("%-20s %-14s %4d  %s\n", c.instance.c_str(), c.algorithm.c_str(), c.repetition,
                  c.status.c_str());
      continue;
    }
    std::printf("%-20s %-14s %4d %10s %10s %10s %6s %6d\n", c.instance.c_str(), c.algorithm.c_str(),
                c.repetition, show(c.hv).c_str(), show(c.igd).c_str(), show(c.igd_plus).c_str(),
                show(c.fsr).c_str(), c.generations);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chance-constrained multiple-choice knapsack: instances, NHILS runs, metrics"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate benchmark instances");
  std::string gen_kind = "lab", gen_scale = "ls1", gen_out, gen_dir = "fixtures";
  std::uint64_t gen_seed = 1;
  bool gen_all = false, gen_embed = false;
  gen->add_option("--kind", gen_kind, "lab or app")->check(CLI::IsMember({"lab", "app"}));
  gen->add_option("--scale", gen_scale, "ls1 .. ls6");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("-o,--output", gen_out, "output file (default: stdout)");
  gen->add_flag("--all", gen_all, "write all 12 benchmark instances into --dir");
  gen->add_option("--dir", gen_dir, "directory for --all");
  gen->add_flag("--embed-banks", gen_embed, "store every bank value instead of the bank seed");

  // run
  auto* run = app.add_subcommand("run", "execute an experiment plan");
  std::string plan_path, budget, output, rcl, schedule;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  run->add_option("plan", plan_path, "plan file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "override the plan seed");
  run->add_option("--repetitions", reps, "override repetitions");
  run->add_option("--budget", budget, "generations:N or walltime:Variant[:N]");
  run->add_option("--output", output, "output directory");
  run->add_option("--rcl-samples", rcl, "reference-CL sample count");
  run->add_option("--schedule", schedule, "staged schedule, e.g. 10000:0.999,1000000:inf");

  // compare-mc
  auto* cmp = app.add_subcommand("compare-mc", "staged vs fixed-sample evaluation on random solutions");
  std::string cmp_instance = "lab:ls1:1", cmp_fixed = "1e6", cmp_schedule, cmp_out;
  std::size_t cmp_count = 200;
  std::uint64_t cmp_pop_seed = 7, cmp_seed = 1;
  cmp->add_option("--instance", cmp_instance, "lab:ls1[:seed], app:..., or a JSON file");
  cmp->add_option("--solutions", cmp_count, "number of uniformly random solutions");
  cmp->add_option("--solution-seed", cmp_pop_seed, "seed for the random solutions");
  cmp->add_option("--fixed-samples", cmp_fixed, "fixed estimator sample count");
  cmp->add_option("--schedule", cmp_schedule, "staged schedule (default: standard)");
  cmp->add_option("--seed", cmp_seed, "evaluation seed");
  cmp->add_option("--output", cmp_out, "per-solution TSV");

  // metrics
  auto* met = app.add_subcommand("metrics", "recompute HV / IGD / IGD+ from stored front files");
  std::string fronts_dir, met_out;
  double margin = 0.1;
  met->add_option("fronts", fronts_dir, "directory of front files")->required()->check(CLI::ExistingDirectory);
  met->add_option("--output", met_out, "write results tables here (default: print only)");
  met->add_option("--hv-margin", margin, "reference point margin");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      WriteOptions opts{gen_embed};
      if (gen_all) {
        fs::create_directories(gen_dir);
        for (bool is_app : {false, true})
          for (Scale s : kAllScales) {
            const Instance inst = is_app ? generate_app_instance(s, gen_seed) : generate_lab_instance(s, gen_seed);
            const fs::path p = fs::path(gen_dir) / (label_for(is_app, s) + ".json");
            save_instance(inst, p, opts);
            std::cout << p.string() << '\n';
          }
        return 0;
      }
      const Scale s = parse_scale(gen_scale);
      const Instance inst = gen_kind == "app" ? generate_app_instance(s, gen_seed) : generate_lab_instance(s, gen_seed);
      if (gen_out.empty()) write_instance(inst, std::cout, opts);
      else save_instance(inst, gen_out, opts);
      return 0;
    }

    if (*run) {
      ExperimentPlan plan = ExperimentPlan::load(plan_path);
      if (seed) plan.seed = *seed;
      if (reps) plan.repetitions = *reps;
      if (!budget.empty()) plan.budget = Budget::parse(budget);
      if (!output.empty()) plan.output_dir = output;
      if (!rcl.empty()) plan.rcl_samples = count_arg(rcl);
      if (!schedule.empty()) plan.base.schedule = StageSchedule::parse(schedule);
      plan.validate();
      const ResultsBundle b = run_plan(plan);
      print_summary(b);
      std::cout << "results written to " << plan.output_dir.string() << '\n';
      return 0;
    }

    if (*cmp) {
      const Instance inst = InstanceRef::parse(cmp_instance).load(1);
      const auto sols = random_solutions(inst, cmp_count, cmp_pop_seed);
      const StageSchedule sched = cmp_schedule.empty() ? StageSchedule::standard() : StageSchedule::parse(cmp_schedule);
      const EvaluatorComparison c = compare_evaluators(inst, sols, sched, count_arg(cmp_fixed), cmp_seed);
      std::printf("instance            %s\n", inst.label.c_str());
      std::printf("solutions           %zu\n", c.solutions);
      std::printf("staged samples      %llu  (%.2fs)\n", static_cast<unsigned long long>(c.opera_samples),
                  c.opera_seconds);
      std::printf("fixed samples       %llu  (%.2fs)\n", static_cast<unsigned long long>(c.fixed_samples),
                  c.fixed_seconds);
      std::printf("sample reduction    %.4f\n", c.sample_reduction());
      std::printf("dominance agreement %.5f\n", c.dominance_agreement);
      std::printf("max |delta p|       %.6f\n", c.max_abs_delta);
      std::printf("mean |delta p|      %.6f\n", c.mean_abs_delta);
      if (!cmp_out.empty()) {
        std::ofstream out(cmp_out);
        out << "# ccmckp-compare 1\nindex\tcost\tstaged_p\tstaged_samples\tfixed_p\n";
        for (std::size_t k = 0; k < sols.size(); ++k) {
          char buf[160];
          std::snprintf(buf, sizeof buf, "%zu\t%.17g\t%.17g\t%llu\t%.17g\n", k, evaluate_cost(inst, sols[k]),
                        c.opera_p[k], static_cast<unsigned long long>(c.opera_used[k]), c.fixed_p[k]);
          out << buf;
        }
      }
      return 0;
    }

    if (*met) {
      std::vector<fs::path> paths;
      for (const auto& e : fs::directory_iterator(fronts_dir))
        if (e.is_regular_file() && e.path().extension() == ".tsv") paths.push_back(e.path());
      std::sort(paths.begin(), paths.end());
      std::vector<FrontFile> files;
      for (const auto& p : paths) files.push_back(read_front_file(p));
      const ResultsBundle b = recompute_metrics(files, margin);
      print_summary(b);
      if (!met_out.empty()) {
        ExperimentPlan plan;
        plan.output_dir = met_out;
        plan.hv_margin = margin;
        write_results(b, plan);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
