#include "ccmckp/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace ccmckp {

WeightOracle::WeightOracle(WeightSpec spec, std::vector<double> bank)
    : sampler_(spec), bank_(std::move(bank)) {
  if (bank_.empty()) throw std::invalid_argument("weight bank must not be empty");
  double sum = 0.0;
  for (double w : bank_) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument("weight bank values must be finite and >= 0");
    sum += w;
  }
  mean_ = sum / static_cast<double>(bank_.size());
  if (bank_.size() > 1) {
    double ss = 0.0;
    for (double w : bank_) ss += (w - mean_) * (w - mean_);
    stddev_ = std::sqrt(ss / static_cast<double>(bank_.size() - 1));
  }
}

WeightOracle WeightOracle::from_seed(const WeightSpec& spec, std::size_t bank_size,
                                     std::uint64_t bank_seed) {
  const WeightSampler sampler(spec);
  RandomStream rng(bank_seed);
  std::vector<double> bank(bank_size);
  for (double& w : bank) w = sampler.draw(rng);
  return WeightOracle(spec, std::move(bank));
}

}  // namespace ccmckp
