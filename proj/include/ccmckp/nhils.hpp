#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ccmckp/metrics.hpp"
#include "ccmckp/moea.hpp"
#include "ccmckp/sampling.hpp"

namespace ccmckp {

enum class Variant { Full, NoLocalSearch, NoHybridInit, PlainNsga2 };

std::string_view variant_name(Variant v) noexcept;
Variant parse_variant(std::string_view name);

inline bool uses_hybrid_init(Variant v) { return v == Variant::Full || v == Variant::NoLocalSearch; }
inline bool uses_local_search(Variant v) { return v == Variant::Full || v == Variant::NoHybridInit; }

// Thrown when even the lightest item of every class exceeds the capacity in
// surrogate weight.
class IrreparableInstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NhilsConfig {
  std::size_t population_size = 100;
  int max_generations = 100;
  double local_search_prob = 0.1;
  SurrogateConfig surrogate;
  VariationConfig variation;
  StageSchedule schedule = StageSchedule::standard();
  std::optional<std::size_t> max_perturbation_attempts;  // default 100 * S
  std::optional<std::size_t> double_swap_pairs;          // default m
  Variant variant = Variant::Full;
  std::uint64_t run_seed = 0;
  // Checked between generations only.
  std::optional<double> time_limit_seconds;

  std::size_t perturbation_attempts() const {
    return max_perturbation_attempts.value_or(100 * population_size);
  }
  void validate() const;
};

// Wraps the staged estimator and counts what it spends.
class Evaluator {
 public:
  Evaluator(const Instance& instance, StageSchedule schedule);

  Evaluation evaluate(const Solution& s, RandomStream& rng);

  std::uint64_t samples() const noexcept { return samples_; }
  std::uint64_t evaluations() const noexcept { return evaluations_; }
  const Instance& instance() const noexcept { return instance_; }

 private:
  const Instance& instance_;
  StageSchedule schedule_;
  std::uint64_t samples_ = 0;
  std::uint64_t evaluations_ = 0;
};

// Everything the local-search operators read or spend.
struct SearchContext {
  const Instance& instance;
  const NhilsConfig& config;
  const SurrogateTable& surrogate;
  Evaluator& evaluator;
};

// Per class, the item maximizing (max cost in class - cost) / surrogate weight.
Solution greedy_seed(const Instance& instance, const SurrogateConfig& cfg);

// Swaps items for lighter ones until the surrogate total fits the capacity.
Solution repair_to_surrogate_feasible(const Instance& instance, Solution s,
                                      const SurrogateConfig& cfg);

// S surrogate-feasible solutions: the repaired greedy seed followed by
// perturbations of it. Not evaluated.
std::vector<Solution> hybrid_initialization(const Instance& instance, const NhilsConfig& cfg,
                                            RandomStream& rng);

Individual local_search_single_swap(const SearchContext& ctx, Individual x, RandomStream& rng);
Individual local_search_double_swap(const SearchContext& ctx, Individual x, RandomStream& rng);
Individual local_search_degradation(const SearchContext& ctx, Individual x, RandomStream& rng);
// Single swap, then double swap, then degradation.
Individual local_search(const SearchContext& ctx, Individual x, RandomStream& rng);

struct GenerationStats {
  int generation = 0;
  std::size_t feasible = 0;
  std::uint64_t evaluations = 0;  // cumulative
  std::uint64_t samples = 0;      // cumulative
  std::vector<ObjectivePoint> front;
};

struct RunResult {
  std::string variant;
  std::uint64_t run_seed = 0;
  int generations = 0;
  std::vector<Individual> population;
  std::vector<GenerationStats> history;
  std::uint64_t total_samples = 0;
  std::uint64_t evaluations = 0;
  double wall_seconds = 0.0;
};

RunResult run_nhils(const Instance& instance, const NhilsConfig& cfg);

// Feasible (by estimate) non-dominated objective points, cost ascending.
std::vector<ObjectivePoint> feasible_front(const std::vector<Individual>& population);

// JSON document of a run. Wall time is only included on request so that the
// default output is reproducible byte for byte.
std::string run_result_to_json(const RunResult& result, bool include_timing = false);

}  // namespace ccmckp
