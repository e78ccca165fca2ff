#include "ccmckp/sampling.hpp"

#include <array>
#include <span>

namespace ccmckp {

namespace {
constexpr std::size_t kChunk = 2048;
}

double draw_weight(const WeightOracle& oracle, RandomStream& rng) {
  return oracle.sampler().draw(rng);
}

double draw_total_weight(const Instance& instance, const Solution& s, RandomStream& rng) {
  double total = 0.0;
  for (std::size_t i = 0; i < s.genes.size(); ++i)
    total += instance.classes[i].items[static_cast<std::size_t>(s.genes[i])].oracle.sampler().draw(rng);
  return total;
}

std::uint64_t count_within_capacity(const Instance& instance, const Solution& s, std::uint64_t n,
                                    RandomStream& rng) {
  std::vector<const WeightSampler*> samplers;
  samplers.reserve(s.genes.size());
  double constant = 0.0;
  for (std::size_t i = 0; i < s.genes.size(); ++i) {
    const WeightSampler& ws =
        instance.classes[i].items[static_cast<std::size_t>(s.genes[i])].oracle.sampler();
    if (ws.degenerate())
      constant += ws.draw(rng);  // consumes nothing
    else
      samplers.push_back(&ws);
  }
  const double capacity = instance.capacity;
  if (samplers.empty()) return constant <= capacity ? n : 0;

  // Samples are drawn a chunk at a time, item by item, so every call with
  // the same n consumes the stream identically.
  std::array<double, kChunk> buffer;
  std::uint64_t within = 0;
  std::uint64_t remaining = n;
  while (remaining > 0) {
    const std::size_t len = static_cast<std::size_t>(std::min<std::uint64_t>(remaining, kChunk));
    std::span<double> totals(buffer.data(), len);
    std::fill(totals.begin(), totals.end(), constant);
    for (const WeightSampler* ws : samplers) ws->add_to(totals, rng);
    for (double t : totals) within += t <= capacity ? 1U : 0U;
    remaining -= len;
  }
  return within;
}

double surrogate_weight(const WeightOracle& oracle, const SurrogateConfig& cfg) {
  return oracle.mean() + cfg.lambda * oracle.stddev();
}

double surrogate_total(const Instance& instance, const Solution& s, const SurrogateConfig& cfg) {
  double total = 0.0;
  for (std::size_t i = 0; i < s.genes.size(); ++i)
    total += surrogate_weight(instance.classes[i].items[static_cast<std::size_t>(s.genes[i])].oracle,
                              cfg);
  return total;
}

SurrogateTable::SurrogateTable(const Instance& instance, const SurrogateConfig& cfg)
    : capacity_(instance.capacity) {
  table_.reserve(instance.classes.size());
  for (const auto& cls : instance.classes) {
    std::vector<double> row;
    row.reserve(cls.items.size());
    for (const auto& item : cls.items) row.push_back(surrogate_weight(item.oracle, cfg));
    table_.push_back(std::move(row));
  }
}

double SurrogateTable::total(const Solution& s) const {
  double total = 0.0;
  for (std::size_t i = 0; i < s.genes.size(); ++i) total += at(i, s.genes[i]);
  return total;
}

}  // namespace ccmckp
