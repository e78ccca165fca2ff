#include "ccmckp/moea.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ccmckp {

Evaluation make_evaluation(double cost, const ClEstimate& cl, double required_confidence) {
  Evaluation e;
  e.cost = cost;
  e.neg_cl = -cl.p_hat;
  e.cl = cl;
  e.violation = std::max(0.0, required_confidence - cl.p_hat);
  e.feasible = e.violation == 0.0;
  return e;
}

bool pareto_dominates(const Evaluation& a, const Evaluation& b) noexcept {
  return a.cost <= b.cost && a.neg_cl <= b.neg_cl && (a.cost < b.cost || a.neg_cl < b.neg_cl);
}

bool constrained_dominates(const Evaluation& a, const Evaluation& b) noexcept {
  if (a.feasible != b.feasible) return a.feasible;
  if (!a.feasible) return a.violation < b.violation;
  return pareto_dominates(a, b);
}

Fronts nondominated_sort(std::span<const Evaluation> evals) {
  const std::size_t n = evals.size();
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<std::size_t> dominators(n, 0);
  Fronts fronts;
  std::vector<std::size_t> current;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (constrained_dominates(evals[p], evals[q])) {
        dominated[p].push_back(q);
        ++dominators[q];
      } else if (constrained_dominates(evals[q], evals[p])) {
        dominated[q].push_back(p);
        ++dominators[p];
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p)
    if (dominators[p] == 0) current.push_back(p);
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t p : current)
      for (std::size_t q : dominated[p])
        if (--dominators[q] == 0) next.push_back(q);
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> crowding_distance(std::span<const Evaluation> front) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t n = front.size();
  std::vector<double> dist(n, 0.0);
  if (n <= 2) {
    std::fill(dist.begin(), dist.end(), inf);
    return dist;
  }
  std::vector<std::size_t> order(n);
  for (int objective = 0; objective < 2; ++objective) {
    auto value = [&](std::size_t k) { return objective == 0 ? front[k].cost : front[k].neg_cl; };
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return value(a) < value(b); });
    dist[order.front()] = inf;
    dist[order.back()] = inf;
    const double range = value(order.back()) - value(order.front());
    if (range <= 0.0) continue;
    for (std::size_t k = 1; k + 1 < n; ++k)
      dist[order[k]] += (value(order[k + 1]) - value(order[k - 1])) / range;
  }
  return dist;
}

std::vector<std::size_t> select_survivors(std::span<Individual> merged, std::size_t target_size) {
  if (target_size > merged.size())
    throw std::invalid_argument("target size exceeds merged population");
  std::vector<Evaluation> evals;
  evals.reserve(merged.size());
  for (const auto& ind : merged) evals.push_back(ind.eval);
  const Fronts fronts = nondominated_sort(evals);

  std::vector<std::size_t> chosen;
  chosen.reserve(target_size);
  for (std::size_t r = 0; r < fronts.size() && chosen.size() < target_size; ++r) {
    const auto& front = fronts[r];
    std::vector<Evaluation> fe;
    fe.reserve(front.size());
    for (std::size_t idx : front) fe.push_back(evals[idx]);
    const std::vector<double> cd = crowding_distance(fe);
    for (std::size_t k = 0; k < front.size(); ++k) {
      merged[front[k]].rank = static_cast<int>(r);
      merged[front[k]].crowding = cd[k];
    }
    if (chosen.size() + front.size() <= target_size) {
      chosen.insert(chosen.end(), front.begin(), front.end());
      continue;
    }
    std::vector<std::size_t> order(front.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (cd[a] != cd[b]) return cd[a] > cd[b];
      if (fe[a].cost != fe[b].cost) return fe[a].cost < fe[b].cost;
      return front[a] < front[b];
    });
    for (std::size_t k = 0; chosen.size() < target_size; ++k) chosen.push_back(front[order[k]]);
  }
  return chosen;
}

std::vector<Individual> environmental_selection(std::vector<Individual> merged,
                                                std::size_t target_size) {
  const std::vector<std::size_t> idx = select_survivors(merged, target_size);
  std::vector<Individual> out;
  out.reserve(idx.size());
  for (std::size_t k : idx) out.push_back(merged[k]);
  return out;
}

std::size_t binary_tournament(std::span<const Individual> population, RandomStream& rng) {
  const std::size_t a = rng.below(population.size());
  const std::size_t b = rng.below(population.size());
  const Individual& x = population[a];
  const Individual& y = population[b];
  if (y.rank < x.rank) return b;
  if (y.rank == x.rank && y.crowding > x.crowding) return b;
  return a;
}

void VariationConfig::validate() const {
  if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0))
    throw std::invalid_argument("crossover_prob must lie in [0, 1]");
  if (mutation_prob && !(*mutation_prob >= 0.0 && *mutation_prob <= 1.0))
    throw std::invalid_argument("mutation_prob must lie in [0, 1]");
  if (!(crossover_index >= 0.0) || !(mutation_index >= 0.0))
    throw std::invalid_argument("distribution indices must be >= 0");
}

namespace {

int round_clamp(double v, int upper) {
  const long r = std::lround(v);
  return static_cast<int>(std::clamp<long>(r, 0, upper));
}

double sbx_betaq(double beta, double eta, double u) {
  const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
  if (u <= 1.0 / alpha) return std::pow(u * alpha, 1.0 / (eta + 1.0));
  return std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
}

}  // namespace

std::pair<Solution, Solution> crossover(const Solution& p1, const Solution& p2,
                                        std::span<const int> class_sizes,
                                        const VariationConfig& cfg, RandomStream& rng) {
  Solution c1 = p1;
  Solution c2 = p2;
  if (rng.uniform01() >= cfg.crossover_prob) return {c1, c2};
  const double eta = cfg.crossover_index;
  for (std::size_t i = 0; i < p1.genes.size(); ++i) {
    const int upper = class_sizes[i] - 1;
    if (rng.uniform01() > 0.5 || upper == 0) continue;
    const double a = p1.genes[i];
    const double b = p2.genes[i];
    if (std::fabs(a - b) <= 1e-14) continue;
    const double y1 = std::min(a, b);
    const double y2 = std::max(a, b);
    const double yl = 0.0;
    const double yu = upper;
    const double u = rng.uniform01();
    const double bq1 = sbx_betaq(1.0 + 2.0 * (y1 - yl) / (y2 - y1), eta, u);
    const double v1 = 0.5 * ((y1 + y2) - bq1 * (y2 - y1));
    const double bq2 = sbx_betaq(1.0 + 2.0 * (yu - y2) / (y2 - y1), eta, u);
    const double v2 = 0.5 * ((y1 + y2) + bq2 * (y2 - y1));
    int g1 = round_clamp(v1, upper);
    int g2 = round_clamp(v2, upper);
    if (rng.uniform01() <= 0.5) std::swap(g1, g2);
    c1.genes[i] = g1;
    c2.genes[i] = g2;
  }
  return {c1, c2};
}

Solution mutate(const Solution& s, std::span<const int> class_sizes, const VariationConfig& cfg,
                RandomStream& rng) {
  Solution out = s;
  const double pm = cfg.mutation_probability(s.genes.size());
  const double eta = cfg.mutation_index;
  const double power = 1.0 / (eta + 1.0);
  for (std::size_t i = 0; i < out.genes.size(); ++i) {
    const int upper = class_sizes[i] - 1;
    if (rng.uniform01() >= pm || upper == 0) continue;
    const double y = out.genes[i];
    const double range = upper;
    const double d1 = y / range;
    const double d2 = (range - y) / range;
    const double u = rng.uniform01();
    double dq;
    if (u <= 0.5) {
      const double v = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, eta + 1.0);
      dq = std::pow(v, power) - 1.0;
    } else {
      const double v = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - d2, eta + 1.0);
      dq = 1.0 - std::pow(v, power);
    }
    out.genes[i] = round_clamp(y + dq * range, upper);
  }
  return out;
}

}  // namespace ccmckp
