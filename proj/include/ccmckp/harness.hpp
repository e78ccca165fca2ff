#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ccmckp/generators.hpp"
#include "ccmckp/instance.hpp"
#include "ccmckp/metrics.hpp"
#include "ccmckp/nhils.hpp"

namespace ccmckp {

// "lab:ls1[:seed]", "app:ls3[:seed]" or "file:<path>" (a bare path also works).
struct InstanceRef {
  enum class Kind { Lab, App, File } kind = Kind::Lab;
  Scale scale = Scale::ls1;
  std::optional<std::uint64_t> seed;  // generated refs; defaults to the plan seed
  std::filesystem::path path;

  static InstanceRef parse(const std::string& text);
  std::string to_string() const;
  Instance load(std::uint64_t default_seed) const;
};

struct Budget {
  enum class Kind { Generations, WallTimeMatched } kind = Kind::Generations;
  int generations = 100;  // for WallTimeMatched: the anchor's generation count
  Variant anchor = Variant::Full;

  static Budget parse(const std::string& text);  // "generations:100", "walltime:Full"
  std::string to_string() const;
};

struct AlgorithmSpec {
  Variant variant = Variant::Full;
  std::map<std::string, std::string> overrides;  // NhilsConfig keys
};

struct ExperimentPlan {
  std::uint64_t seed = 1;
  std::vector<InstanceRef> instances;
  std::vector<AlgorithmSpec> algorithms;
  int repetitions = 5;
  Budget budget;
  std::uint64_t rcl_samples = 1'000'000;
  double hv_margin = 0.1;
  NhilsConfig base;  // shared settings; variant and seed are set per cell
  std::filesystem::path output_dir = "results";
  bool emit_fronts = true;
  bool emit_runs = false;  // full run documents per cell

  // Human-readable "key = value" document; '#' starts a comment.
  static ExperimentPlan parse(const std::string& text);
  static ExperimentPlan load(const std::filesystem::path& path);
  void validate() const;
};

// Applies "key = value" settings (population_size, local_search_prob, ...).
void apply_config_setting(NhilsConfig& cfg, const std::string& key, const std::string& value);

struct CellResult {
  std::string instance;
  std::string algorithm;
  int repetition = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";  // "ok" or "error: ..."
  std::vector<ObjectivePoint> front;
  std::optional<double> hv, igd, igd_plus, fsr;
  int generations = 0;
  std::uint64_t samples = 0;
  std::uint64_t evaluations = 0;
  double wall_seconds = 0.0;
};

struct ResultsBundle {
  std::vector<CellResult> cells;
  std::map<std::string, ReferenceData> references;  // by instance label
};

// Runs every (instance, algorithm, repetition) cell, scores it against the
// per-instance reference built from all cells and, when output_dir is not
// empty, writes results.tsv, summary.tsv, reference.tsv, timing.tsv and the
// per-run front files. Cell failures are recorded, never rethrown.
ResultsBundle run_plan(const ExperimentPlan& plan);

void write_results(const ResultsBundle& bundle, const ExperimentPlan& plan);

// Per (instance, algorithm, repetition) file of front points (cost, cl).
std::vector<std::filesystem::path> emit_front_plots_data(const ResultsBundle& bundle,
                                                         const std::filesystem::path& dir);

struct FrontFile {
  std::string instance;
  std::string algorithm;
  int repetition = 0;
  std::vector<ObjectivePoint> points;
};
FrontFile read_front_file(const std::filesystem::path& path);

// Recomputes HV / IGD / IGD+ from stored front files (FSR needs populations
// and is not recomputed).
ResultsBundle recompute_metrics(const std::vector<FrontFile>& fronts, double hv_margin = 0.1);

struct EvaluatorComparison {
  std::size_t solutions = 0;
  std::uint64_t opera_samples = 0;
  std::uint64_t fixed_samples = 0;
  double opera_seconds = 0.0;
  double fixed_seconds = 0.0;
  std::vector<double> opera_p;
  std::vector<double> fixed_p;
  std::vector<std::uint64_t> opera_used;
  double max_abs_delta = 0.0;
  double mean_abs_delta = 0.0;
  // Share of unordered pairs whose dominance relation on (cost, p_hat) is the
  // same under both evaluators.
  double dominance_agreement = 1.0;

  double sample_reduction() const {
    return fixed_samples == 0 ? 0.0
                              : 1.0 - static_cast<double>(opera_samples) /
                                          static_cast<double>(fixed_samples);
  }
};

EvaluatorComparison compare_evaluators(const Instance& instance,
                                       const std::vector<Solution>& solutions,
                                       const StageSchedule& schedule, std::uint64_t fixed_n,
                                       std::uint64_t seed);

std::vector<Solution> random_solutions(const Instance& instance, std::size_t count,
                                       std::uint64_t seed);

// Mean and sample standard deviation; "-" cells are skipped by callers.
struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t n = 0;
};
MeanSd mean_sd(const std::vector<double>& values);

}  // namespace ccmckp
