#pragma once

#include <cstdint>
#include <vector>

#include "ccmckp/instance.hpp"

namespace ccmckp::testing {

// Item whose weight is always `w`.
inline Item fixed_item(double cost, double w, std::size_t bank = 4) {
  return Item{cost, WeightOracle(UniformParams{w, w}, std::vector<double>(bank, w)), std::nullopt};
}

inline Item spec_item(double cost, const WeightSpec& spec, std::size_t bank = 64,
                      std::uint64_t seed = 1) {
  return Item{cost, WeightOracle::from_seed(spec, bank, seed), seed};
}

// costs[i][j], weights[i][j]: one degenerate item per entry.
inline Instance fixed_instance(const std::vector<std::vector<double>>& costs,
                               const std::vector<std::vector<double>>& weights, double capacity,
                               double confidence = 0.9) {
  Instance inst;
  inst.label = "toy";
  inst.capacity = capacity;
  inst.required_confidence = confidence;
  inst.bank_size = 4;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    ItemClass cls;
    for (std::size_t j = 0; j < costs[i].size(); ++j)
      cls.items.push_back(fixed_item(costs[i][j], weights[i][j]));
    inst.classes.push_back(std::move(cls));
  }
  return inst;
}

// m = 1, one Uniform(0, 1) item, W = 0.5: true CL is exactly 0.5.
inline Instance half_instance() {
  Instance inst;
  inst.label = "half";
  inst.capacity = 0.5;
  inst.bank_size = 64;
  inst.classes.push_back(ItemClass{{spec_item(1.0, UniformParams{0.0, 1.0})}});
  return inst;
}

// Every selection of a multi-class instance, in lexicographic order.
inline std::vector<Solution> all_solutions(const Instance& inst) {
  std::vector<Solution> out;
  Solution s;
  s.genes.assign(inst.class_count(), 0);
  const std::vector<int> sizes = inst.class_sizes();
  while (true) {
    out.push_back(s);
    int i = static_cast<int>(sizes.size()) - 1;
    while (i >= 0 && ++s.genes[static_cast<std::size_t>(i)] == sizes[static_cast<std::size_t>(i)]) {
      s.genes[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) return out;
  }
}

}  // namespace ccmckp::testing
