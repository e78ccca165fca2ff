#include "ccmckp/instance.hpp"

#include <cmath>

namespace ccmckp {

std::vector<int> Instance::class_sizes() const {
  std::vector<int> sizes;
  sizes.reserve(classes.size());
  for (const auto& c : classes) sizes.push_back(static_cast<int>(c.items.size()));
  return sizes;
}

void Instance::validate() const {
  if (classes.empty()) throw InstanceError("classes", "at least one class is required");
  if (!(capacity > 0.0) || !std::isfinite(capacity))
    throw InstanceError("capacity", "must be finite and > 0");
  if (!(required_confidence > 0.0 && required_confidence < 1.0))
    throw InstanceError("required_confidence", "must lie in (0, 1)");
  if (bank_size == 0) throw InstanceError("bank_size", "must be positive");
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const auto& items = classes[i].items;
    const std::string cpath = "classes[" + std::to_string(i) + "]";
    if (items.empty()) throw InstanceError(cpath + ".items", "class must not be empty");
    for (std::size_t j = 0; j < items.size(); ++j) {
      const std::string ipath = cpath + ".items[" + std::to_string(j) + "]";
      const Item& item = items[j];
      if (!(item.cost >= 0.0) || !std::isfinite(item.cost))
        throw InstanceError(ipath + ".cost", "must be finite and >= 0");
      if (item.oracle.bank().size() != bank_size)
        throw InstanceError(ipath + ".bank", "length must equal bank_size");
      if (const auto* app = std::get_if<AppRetransmissionParams>(&item.oracle.spec())) {
        if (!(app->failure_weight > capacity))
          throw InstanceError(ipath + ".weight.failure_weight", "must exceed capacity");
      }
    }
  }
}

bool is_valid_for(const Instance& instance, const Solution& s) noexcept {
  if (s.genes.size() != instance.classes.size()) return false;
  for (std::size_t i = 0; i < s.genes.size(); ++i) {
    if (s.genes[i] < 0 || s.genes[i] >= static_cast<int>(instance.classes[i].items.size()))
      return false;
  }
  return true;
}

void check_solution(const Instance& instance, const Solution& s) {
  if (!is_valid_for(instance, s))
    throw std::invalid_argument("solution does not select one valid item per class");
}

double evaluate_cost(const Instance& instance, const Solution& s) {
  double total = 0.0;
  for (std::size_t i = 0; i < s.genes.size(); ++i)
    total += instance.classes[i].items[static_cast<std::size_t>(s.genes[i])].cost;
  return total;
}

}  // namespace ccmckp
