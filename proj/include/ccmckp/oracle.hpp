#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ccmckp/distributions.hpp"

namespace ccmckp {

// Sampling oracle for one item's weight: the generative distribution plus a
// fixed bank of i.i.d. draws from which the item's mean and standard
// deviation are computed. The bank never changes after construction.
class WeightOracle {
 public:
  WeightOracle(WeightSpec spec, std::vector<double> bank);

  // Draws the bank from a stream seeded with bank_seed.
  static WeightOracle from_seed(const WeightSpec& spec, std::size_t bank_size,
                                std::uint64_t bank_seed);

  const WeightSpec& spec() const noexcept { return sampler_.spec(); }
  const WeightSampler& sampler() const noexcept { return sampler_; }
  std::span<const double> bank() const noexcept { return bank_; }

  double mean() const noexcept { return mean_; }
  // Unbiased (n - 1) estimator; 0 for a bank of one draw.
  double stddev() const noexcept { return stddev_; }

  bool operator==(const WeightOracle& other) const {
    return spec() == other.spec() && bank_ == other.bank_;
  }

 private:
  WeightSampler sampler_;
  std::vector<double> bank_;
  double mean_ = 0.0;
  double stddev_ = 0.0;
};

}  // namespace ccmckp
