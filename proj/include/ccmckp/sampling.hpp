#pragma once

#include <cstdint>
#include <vector>

#include "ccmckp/instance.hpp"

namespace ccmckp {

// Risk-adjusted deterministic proxy w = mean + lambda * stddev.
struct SurrogateConfig {
  double lambda = 3.0;
};

double draw_weight(const WeightOracle& oracle, RandomStream& rng);

// One sample of the total weight of the selected items.
double draw_total_weight(const Instance& instance, const Solution& s, RandomStream& rng);

// Number of draws, out of n fresh total-weight samples, with total <= capacity.
std::uint64_t count_within_capacity(const Instance& instance, const Solution& s, std::uint64_t n,
                                    RandomStream& rng);

double surrogate_weight(const WeightOracle& oracle, const SurrogateConfig& cfg);

double surrogate_total(const Instance& instance, const Solution& s, const SurrogateConfig& cfg);

// Precomputed surrogate weights, table[i][j] for item j of class i.
class SurrogateTable {
 public:
  SurrogateTable(const Instance& instance, const SurrogateConfig& cfg);

  double at(std::size_t cls, int item) const { return table_[cls][static_cast<std::size_t>(item)]; }
  double total(const Solution& s) const;
  const std::vector<double>& row(std::size_t cls) const { return table_[cls]; }
  double capacity() const noexcept { return capacity_; }
  bool feasible(const Solution& s) const { return total(s) <= capacity_; }

 private:
  std::vector<std::vector<double>> table_;
  double capacity_;
};

}  // namespace ccmckp
