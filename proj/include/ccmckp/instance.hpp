#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccmckp/oracle.hpp"

namespace ccmckp {

// Raised for malformed or invariant-violating instance data. what() starts
// with the path of the offending field, e.g. "classes[3].items[0].cost: ...".
class InstanceError : public std::runtime_error {
 public:
  InstanceError(const std::string& path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct Item {
  double cost = 0.0;
  WeightOracle oracle;
  // Set when the bank was drawn from a seed; lets documents omit the bank.
  std::optional<std::uint64_t> bank_seed;

  bool operator==(const Item&) const = default;
};

struct ItemClass {
  std::vector<Item> items;
  bool operator==(const ItemClass&) const = default;
};

// A multi-objective chance-constrained multiple-choice knapsack instance.
// Immutable after construction by convention; all members are values.
struct Instance {
  std::string label;
  std::uint64_t seed = 0;
  double capacity = 0.0;
  double required_confidence = 0.9;
  std::size_t bank_size = 0;
  std::vector<ItemClass> classes;

  std::size_t class_count() const noexcept { return classes.size(); }
  std::vector<int> class_sizes() const;

  // Throws InstanceError on the first violated invariant.
  void validate() const;

  bool operator==(const Instance&) const = default;
};

// genes[i] is the index of the item chosen in class i.
struct Solution {
  std::vector<int> genes;
  auto operator<=>(const Solution&) const = default;
};

bool is_valid_for(const Instance& instance, const Solution& s) noexcept;

// Throws std::invalid_argument if s does not fit the instance.
void check_solution(const Instance& instance, const Solution& s);

// Exact sum of selected costs.
double evaluate_cost(const Instance& instance, const Solution& s);

}  // namespace ccmckp
