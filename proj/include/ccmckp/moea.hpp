#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ccmckp/instance.hpp"
#include "ccmckp/opera_mc.hpp"

namespace ccmckp {

// Objectives of one evaluated solution, both minimized: cost and -p_hat.
struct Evaluation {
  double cost = 0.0;
  double neg_cl = 0.0;
  ClEstimate cl;
  bool feasible = false;
  double violation = 0.0;  // max(0, P0 - p_hat)

  double p_hat() const noexcept { return -neg_cl; }
  bool operator==(const Evaluation&) const = default;
};

Evaluation make_evaluation(double cost, const ClEstimate& cl, double required_confidence);

// Feasible beats infeasible; two infeasible compare by violation; two
// feasible by Pareto dominance on (cost, -p_hat).
bool constrained_dominates(const Evaluation& a, const Evaluation& b) noexcept;

// Plain Pareto dominance on (cost, -p_hat), ignoring feasibility.
bool pareto_dominates(const Evaluation& a, const Evaluation& b) noexcept;

using Fronts = std::vector<std::vector<std::size_t>>;

// Non-dominated layering under constrained dominance. Indices inside a front
// are ascending.
Fronts nondominated_sort(std::span<const Evaluation> evals);

// Crowding distance of each member of one front (infinite at the boundaries).
std::vector<double> crowding_distance(std::span<const Evaluation> front);

struct Individual {
  Solution solution;
  Evaluation eval;
  int rank = 0;  // 0-based front index from the last selection
  double crowding = 0.0;
};

// Indices of the survivors, filled front by front; the last admitted front is
// cut by descending crowding distance, then lower cost, then input order.
// Survivor rank and crowding are written back into `merged`.
std::vector<std::size_t> select_survivors(std::span<Individual> merged, std::size_t target_size);

// Survivors as values, in selection order. Throws std::invalid_argument when
// target_size exceeds the merged population.
std::vector<Individual> environmental_selection(std::vector<Individual> merged,
                                                std::size_t target_size);

// Binary tournament on (rank, crowding); ties keep the first pick.
std::size_t binary_tournament(std::span<const Individual> population, RandomStream& rng);

struct VariationConfig {
  double crossover_prob = 0.9;
  double crossover_index = 15.0;
  std::optional<double> mutation_prob;  // defaults to 1/m
  double mutation_index = 20.0;

  double mutation_probability(std::size_t m) const {
    return mutation_prob.value_or(m == 0 ? 0.0 : 1.0 / static_cast<double>(m));
  }
  void validate() const;
};

// Simulated binary crossover on the integer item indices, rounded and clamped
// to [0, class_size - 1].
std::pair<Solution, Solution> crossover(const Solution& p1, const Solution& p2,
                                        std::span<const int> class_sizes,
                                        const VariationConfig& cfg, RandomStream& rng);

// Polynomial mutation on the integer item indices.
Solution mutate(const Solution& s, std::span<const int> class_sizes, const VariationConfig& cfg,
                RandomStream& rng);

}  // namespace ccmckp
